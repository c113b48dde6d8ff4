// Time integration of the Galerkin-truncated stochastic sine-Gordon equation
// and the Monte Carlo experiments built on it.
#pragma once

#include "sgmeta/field.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace sgmeta {

enum class Scheme { semi_implicit, exponential };

/// Kinetics of the mean û(0).
///  - coefficient: Euclidean dynamics in the coordinates (û(−N), …, û(N)):
///    drift −∂F/∂û(0) = −2π Ĝ(0) and noise √(2ε) dW.
///  - white_noise: the L² gradient flow with space-time white noise: drift
///    −Ĝ(0), noise √(2ε) dW/√(2π).
/// Both share the invariant measure exp(−F/ε); they differ by a constant
/// time change of the mean, which speeds transitions up by about 2π in the
/// coefficient metric.
enum class ZeroModeMetric { coefficient, white_noise };

std::string to_string(Scheme s);
std::string to_string(ZeroModeMetric m);

struct SimConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::semi_implicit;
  std::uint64_t seed = 0;
  double max_time = 1e3;
  int check_every = 10;
  double kappa = 0.05;
  /// Radius of the super-regime sets and the well-entry ball; defaults to
  /// 0.2 · 2π/β when unset.
  std::optional<double> delta;
  double c0 = 4.0;
  ZeroModeMetric zero_mode = ZeroModeMetric::coefficient;
  /// Worker threads for independent trials (0: SG_THREADS or all cores).
  int threads = 0;

  void validate() const;
  double delta_for(const ModelParams& p) const;
};

/// Independent standard normal streams, one per wavenumber, determined by
/// (seed, n) alone. Runs at different truncations with the same seed
/// therefore share the noise of their common modes.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, int N);
  int truncation() const { return N_; }
  /// Fills g (length 2N+1, ordered n = −N..N) with one draw per mode.
  void fill(std::span<double> g);

 private:
  int N_;
  std::vector<std::mt19937_64> engines_;
  std::vector<std::normal_distribution<double>> normals_;
};

/// Seed of trial/realization `index` under master seed `seed` (SplitMix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// One time step; `noise` may be null for the deterministic flow.
FourierField step(const FourierField& u, const ModelParams& p, const SimConfig& c, NoiseSource* noise);

/// Reusable stepper holding the per-mode linear factors.
class Integrator {
 public:
  Integrator(const ModelParams& p, const SimConfig& c, int N);
  void advance(FourierField& u, NoiseSource* noise);

 private:
  ModelParams p_;
  SimConfig c_;
  int N_;
  std::vector<double> decay_, forcing_, noise_scale_, g_;
};

struct Snapshot {
  double t = 0.0;
  FourierField u;
};

/// Integrates to time T, storing the state every `snapshot_every` steps
/// (and at t = 0 and the end).
std::vector<Snapshot> simulate_trajectory(const FourierField& u0, const ModelParams& p, const SimConfig& c, double T,
                                          int snapshot_every, std::optional<std::uint64_t> noise_seed);

/// CSV with header t,u(-N),…,u(N).
void write_trajectory_csv(std::ostream& os, const std::vector<Snapshot>& snapshots);

enum class ExitSide { none, plus, minus };
std::string to_string(ExitSide s);

/// Target set A and initial set B of a transition experiment.
class HittingSets {
 public:
  virtual ~HittingSets() = default;
  /// Which neighbouring well's target set contains u, if any.
  virtual ExitSide in_A(const FourierField& u) const = 0;
  virtual bool in_B(const FourierField& u) const = 0;
};

/// γβ > 1: A = {‖u ∓ 2π/β‖_{C^{1/2−κ}} < δ}, B = {‖u‖_{C^{1/2−κ}} < δ}.
class SuperHittingSets : public HittingSets {
 public:
  SuperHittingSets(const ModelParams& p, const SimConfig& c);
  ExitSide in_A(const FourierField& u) const override;
  bool in_B(const FourierField& u) const override;

 private:
  double well_, delta_, s_;
};

/// γβ < 1: A_ε = {|û(0)| > 2π/β − √ε log(1/ε)},
/// B_ε = {|û(0)| < √ε log(1/ε), ‖u_⊥‖_{C^{1/2−κ}} < √(c₀ ε log(1/ε))}.
class SubHittingSets : public HittingSets {
 public:
  /// Throws std::invalid_argument when ε >= 1.
  SubHittingSets(const ModelParams& p, const SimConfig& c);
  ExitSide in_A(const FourierField& u) const override;
  bool in_B(const FourierField& u) const override;
  double a_threshold() const { return a_threshold_; }
  double b_mean_radius() const { return b_mean_; }
  double b_osc_radius() const { return b_osc_; }

 private:
  double a_threshold_, b_mean_, b_osc_, s_;
};

SuperHittingSets hitting_sets_super(const ModelParams& p, const SimConfig& c);
SubHittingSets hitting_sets_sub(const ModelParams& p, const SimConfig& c);

struct HittingRecord {
  double hit_time = 0.0;
  ExitSide exit_side = ExitSide::none;
  std::uint64_t trial_seed = 0;
  long long steps = 0;
  bool censored = false;
};

struct McResult {
  double mean = 0.0;
  double std_error = 0.0;
  int completed = 0;
  int censored = 0;
  int plus = 0;
  int minus = 0;
  std::vector<HittingRecord> records;
};

/// Mean and standard error of the uncensored hit times; the sum runs over
/// the sorted times so the result does not depend on record order.
void summarize(McResult& r);

/// Independent trials from u ≡ 0 until the first entry into A (A_ε when
/// γβ < 1). Trial i uses the noise seed derive_seed(c.seed, i). Throws
/// std::runtime_error when every trial is censored.
McResult mc_transition_time(const ModelParams& p, const SimConfig& c, int trials);

struct RandomWalkResult {
  /// Well index after each jump (starting well is 0, not listed).
  std::vector<int> wells;
  std::vector<int> signs;
  std::vector<double> jump_times;
  /// Time from the previous jump (or t = 0) to each jump.
  std::vector<double> sojourn_times;
  double total_time = 0.0;
  long long steps = 0;
};

/// One long trajectory; whenever it enters a neighbouring well it is
/// recentred by ∓2π/β on û(0) and a jump is recorded. A well is entered
/// through the super-regime set A when γβ > 1 and through the ball
/// |û(0) ∓ 2π/β| < δ when γβ < 1. Stops at total_time or after max_jumps.
RandomWalkResult random_walk_experiment(const ModelParams& p, const SimConfig& c, double total_time,
                                        std::optional<int> max_jumps = std::nullopt);

struct GalerkinOptions {
  std::vector<int> N_list{16, 32, 64, 128};
  int N_reference = 256;
  double T = 0.2;
  int realizations = 20;
  /// Hölder exponent of the gap norm; 0 measures the sup norm.
  double alpha = 0.0;
  /// Initial state (resized to every truncation); zero when empty.
  std::optional<FourierField> initial;
};

struct GalerkinResult {
  std::vector<int> N_list;
  /// Mean over realizations of ‖u^{(N)}(T) − u^{(N_ref)}(T)‖_{C^α}.
  std::vector<double> mean_gap;
  /// Per-realization gaps, [realization][index into N_list].
  std::vector<std::vector<double>> gaps;
  /// Least-squares slope of log(mean gap) against log N.
  double fitted_exponent = 0.0;
};

/// Runs every truncation on the same noise realization up to time T.
GalerkinResult galerkin_convergence_test(const ModelParams& p, const SimConfig& c, const GalerkinOptions& opt);

/// C^α gap between fields of different truncations, evaluated at the larger.
double holder_gap(const FourierField& a, const FourierField& b, double alpha);

/// Exact two-sided p-value of k successes in n fair coin flips.
double binomial_two_sided_p(int k, int n);

/// Sample standard deviation over mean; NaN for fewer than two values.
double coefficient_of_variation(std::span<const double> x);

}  // namespace sgmeta
