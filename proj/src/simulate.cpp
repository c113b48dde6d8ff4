#include "sgmeta/simulate.hpp"

#include "sgmeta/errors.hpp"
#include "sgmeta/parallel.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace sgmeta {

namespace {
constexpr double pi = std::numbers::pi;

long long step_count(double T, double dt) { return static_cast<long long>(std::llround(T / dt)); }

int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}
}  // namespace

std::string to_string(Scheme s) { return s == Scheme::semi_implicit ? "semi-implicit" : "exponential"; }

std::string to_string(ZeroModeMetric m) { return m == ZeroModeMetric::coefficient ? "coefficient" : "white-noise"; }

std::string to_string(ExitSide s) {
  switch (s) {
    case ExitSide::plus: return "plus";
    case ExitSide::minus: return "minus";
    default: return "none";
  }
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(max_time > 0.0)) throw std::invalid_argument("max_time must be positive");
  if (check_every < 1) throw std::invalid_argument("check_every must be at least 1");
  if (!(kappa > 0.0 && kappa < 0.5)) throw std::invalid_argument("kappa must lie in (0, 1/2)");
  if (delta && !(*delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(c0 > 0.0)) throw std::invalid_argument("c0 must be positive");
}

double SimConfig::delta_for(const ModelParams& p) const { return delta.value_or(0.2 * 2.0 * pi / p.beta); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

NoiseSource::NoiseSource(std::uint64_t seed, int N) : N_(N) {
  engines_.reserve(static_cast<std::size_t>(2 * N + 1));
  normals_.resize(static_cast<std::size_t>(2 * N + 1));
  for (int n = -N; n <= N; ++n) {
    const auto mode = static_cast<std::uint32_t>(static_cast<std::int64_t>(n) + (1LL << 31));
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), mode};
    engines_.emplace_back(seq);
  }
}

void NoiseSource::fill(std::span<double> g) {
  if (g.size() != engines_.size()) throw std::invalid_argument("noise buffer has the wrong length");
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = normals_[i](engines_[i]);
}

Integrator::Integrator(const ModelParams& p, const SimConfig& c, int N)
    : p_(p), c_(c), N_(N), decay_(2 * N + 1), forcing_(2 * N + 1), noise_scale_(2 * N + 1), g_(2 * N + 1) {
  c.validate();
  const double dt = c.dt;
  const double eps = p.epsilon;
  for (int n = -N; n <= N; ++n) {
    const auto i = static_cast<std::size_t>(n + N);
    const double k = double(n) * n;
    if (n == 0) {
      const bool coefficient = c.zero_mode == ZeroModeMetric::coefficient;
      decay_[i] = 1.0;
      forcing_[i] = dt * (coefficient ? 2.0 * pi : 1.0);
      noise_scale_[i] = std::sqrt(2.0 * eps * dt) * (coefficient ? 1.0 : 1.0 / std::sqrt(2.0 * pi));
    } else if (c.scheme == Scheme::semi_implicit) {
      decay_[i] = 1.0 / (1.0 + dt * k);
      forcing_[i] = dt / (1.0 + dt * k);
      noise_scale_[i] = std::sqrt(2.0 * eps * dt) / (1.0 + dt * k);
    } else {
      decay_[i] = std::exp(-k * dt);
      forcing_[i] = -std::expm1(-k * dt) / k;
      noise_scale_[i] = std::sqrt(-eps * std::expm1(-2.0 * k * dt) / k);
    }
  }
}

void Integrator::advance(FourierField& u, NoiseSource* noise) {
  if (u.truncation() != N_) throw std::invalid_argument("field truncation does not match the integrator");
  const FourierField r = reaction_gradient(u, p_);
  auto uc = u.coeffs();
  const auto rc = r.coeffs();
  if (noise) {
    noise->fill(g_);
    for (std::size_t i = 0; i < uc.size(); ++i) uc[i] = decay_[i] * uc[i] - forcing_[i] * rc[i] + noise_scale_[i] * g_[i];
  } else {
    for (std::size_t i = 0; i < uc.size(); ++i) uc[i] = decay_[i] * uc[i] - forcing_[i] * rc[i];
  }
}

FourierField step(const FourierField& u, const ModelParams& p, const SimConfig& c, NoiseSource* noise) {
  Integrator integrator(p, c, u.truncation());
  FourierField out = u;
  integrator.advance(out, noise);
  return out;
}

std::vector<Snapshot> simulate_trajectory(const FourierField& u0, const ModelParams& p, const SimConfig& c, double T,
                                          int snapshot_every, std::optional<std::uint64_t> noise_seed) {
  if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be at least 1");
  const int N = u0.truncation();
  Integrator integrator(p, c, N);
  std::optional<NoiseSource> noise;
  if (noise_seed) noise.emplace(*noise_seed, N);
  std::vector<Snapshot> out{{0.0, u0}};
  FourierField u = u0;
  const long long steps = step_count(T, c.dt);
  for (long long s = 1; s <= steps; ++s) {
    integrator.advance(u, noise ? &*noise : nullptr);
    if (s % snapshot_every == 0 || s == steps) out.push_back({double(s) * c.dt, u});
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<Snapshot>& snapshots) {
  if (snapshots.empty()) return;
  const int N = snapshots.front().u.truncation();
  os << "t";
  for (int n = -N; n <= N; ++n) os << ",u(" << n << ")";
  os << '\n' << std::setprecision(17);
  for (const auto& s : snapshots) {
    os << s.t;
    for (double v : s.u.coeffs()) os << ',' << v;
    os << '\n';
  }
}

SuperHittingSets::SuperHittingSets(const ModelParams& p, const SimConfig& c)
    : well_(2.0 * pi / p.beta), delta_(c.delta_for(p)), s_(0.5 - c.kappa) {}

ExitSide SuperHittingSets::in_A(const FourierField& u) const {
  // Only the zero mode distinguishes the two targets; cheap rejection first.
  const double mean = u.at(0);
  if (std::abs(std::abs(mean) - well_) >= delta_) return ExitSide::none;
  const double centre = mean > 0 ? well_ : -well_;
  FourierField shifted = u;
  shifted.at(0) -= centre;
  if (besov_norm(shifted, s_) < delta_) return mean > 0 ? ExitSide::plus : ExitSide::minus;
  return ExitSide::none;
}

bool SuperHittingSets::in_B(const FourierField& u) const { return besov_norm(u, s_) < delta_; }

SubHittingSets::SubHittingSets(const ModelParams& p, const SimConfig& c) : s_(0.5 - c.kappa) {
  const double eps = p.epsilon;
  if (!(eps < 1.0)) throw std::invalid_argument("epsilon >= 1: log(1/epsilon) <= 0, the sets are empty");
  const double l = std::log(1.0 / eps);
  a_threshold_ = 2.0 * pi / p.beta - std::sqrt(eps) * l;
  b_mean_ = std::sqrt(eps) * l;
  b_osc_ = std::sqrt(c.c0 * eps * l);
}

ExitSide SubHittingSets::in_A(const FourierField& u) const {
  const double mean = u.at(0);
  if (std::abs(mean) <= a_threshold_) return ExitSide::none;
  return mean > 0 ? ExitSide::plus : ExitSide::minus;
}

bool SubHittingSets::in_B(const FourierField& u) const {
  if (!(std::abs(u.at(0)) < b_mean_)) return false;
  return besov_norm(split_mean_osc(u).osc, s_) < b_osc_;
}

SuperHittingSets hitting_sets_super(const ModelParams& p, const SimConfig& c) { return {p, c}; }
SubHittingSets hitting_sets_sub(const ModelParams& p, const SimConfig& c) { return {p, c}; }

void summarize(McResult& r) {
  std::vector<double> times;
  r.plus = r.minus = r.censored = 0;
  for (const auto& rec : r.records) {
    if (rec.censored) {
      ++r.censored;
      continue;
    }
    times.push_back(rec.hit_time);
    if (rec.exit_side == ExitSide::plus) ++r.plus;
    if (rec.exit_side == ExitSide::minus) ++r.minus;
  }
  std::sort(times.begin(), times.end());
  r.completed = static_cast<int>(times.size());
  if (times.empty()) {
    r.mean = r.std_error = 0.0;
    return;
  }
  double sum = 0.0;
  for (double t : times) sum += t;
  r.mean = sum / times.size();
  double ss = 0.0;
  for (double t : times) ss += (t - r.mean) * (t - r.mean);
  r.std_error = times.size() > 1 ? std::sqrt(ss / (times.size() - 1) / times.size()) : 0.0;
}

McResult mc_transition_time(const ModelParams& p, const SimConfig& c, int trials) {
  p.require_regime();
  c.validate();
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  std::unique_ptr<HittingSets> sets;
  if (p.gamma_beta() < 1.0)
    sets = std::make_unique<SubHittingSets>(p, c);
  else
    sets = std::make_unique<SuperHittingSets>(p, c);

  McResult result;
  result.records.resize(static_cast<std::size_t>(trials));
  const long long max_steps = step_count(c.max_time, c.dt);
  parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t i) {
        HittingRecord rec;
        rec.trial_seed = derive_seed(c.seed, i);
        NoiseSource noise(rec.trial_seed, p.N);
        Integrator integrator(p, c, p.N);
        FourierField u(p.N);
        long long s = 0;
        rec.censored = true;
        while (s < max_steps) {
          integrator.advance(u, &noise);
          ++s;
          if (s % c.check_every == 0 || s == max_steps) {
            const ExitSide side = sets->in_A(u);
            if (side != ExitSide::none) {
              rec.exit_side = side;
              rec.censored = false;
              break;
            }
          }
        }
        rec.steps = s;
        rec.hit_time = double(s) * c.dt;
        result.records[i] = rec;
      },
      c.threads);
  summarize(result);
  if (result.completed == 0)
    throw std::runtime_error("all " + std::to_string(trials) + " trials censored at max_time = " +
                             std::to_string(c.max_time) + "; increase --max-time or epsilon");
  return result;
}

RandomWalkResult random_walk_experiment(const ModelParams& p, const SimConfig& c, double total_time,
                                        std::optional<int> max_jumps) {
  p.require_regime();
  c.validate();
  const double well = 2.0 * pi / p.beta;
  const double delta = c.delta_for(p);
  const bool super = p.gamma_beta() > 1.0;
  std::optional<SuperHittingSets> sets;
  if (super) sets.emplace(p, c);

  RandomWalkResult r;
  NoiseSource noise(derive_seed(c.seed, 0), p.N);
  Integrator integrator(p, c, p.N);
  FourierField u(p.N);
  int index = 0;
  double last_jump = 0.0;
  const long long max_steps = step_count(total_time, c.dt);
  long long s = 0;
  while (s < max_steps) {
    integrator.advance(u, &noise);
    ++s;
    if (s % c.check_every != 0) continue;
    ExitSide side = ExitSide::none;
    if (super) {
      side = sets->in_A(u);
    } else if (std::abs(u.at(0) - well) < delta) {
      side = ExitSide::plus;
    } else if (std::abs(u.at(0) + well) < delta) {
      side = ExitSide::minus;
    }
    if (side == ExitSide::none) continue;
    const int sign = side == ExitSide::plus ? 1 : -1;
    u.at(0) -= sign * well;
    index += sign;
    const double t = double(s) * c.dt;
    r.wells.push_back(index);
    r.signs.push_back(sign);
    r.jump_times.push_back(t);
    r.sojourn_times.push_back(t - last_jump);
    last_jump = t;
    if (max_jumps && static_cast<int>(r.signs.size()) >= *max_jumps) break;
  }
  r.steps = s;
  r.total_time = double(s) * c.dt;
  return r;
}

double holder_gap(const FourierField& a, const FourierField& b, double alpha) {
  const int N = std::max(a.truncation(), b.truncation());
  const FourierField d = resized(a, N) - resized(b, N);
  if (alpha > 0.0) return besov_norm(d, alpha);
  const auto values = evaluate_on_grid(d, next_pow2(8 * (2 * N + 1)));
  double sup = 0.0;
  for (double v : values) sup = std::max(sup, std::abs(v));
  return sup;
}

GalerkinResult galerkin_convergence_test(const ModelParams& p, const SimConfig& c, const GalerkinOptions& opt) {
  c.validate();
  if (opt.N_list.empty()) throw std::invalid_argument("N_list is empty");
  if (opt.realizations < 1) throw std::invalid_argument("need at least one realization");
  for (int N : opt.N_list)
    if (N < 1 || N > opt.N_reference) throw std::invalid_argument("every N must lie in [1, N_reference]");

  GalerkinResult out;
  out.N_list = opt.N_list;
  out.gaps.assign(static_cast<std::size_t>(opt.realizations), std::vector<double>(opt.N_list.size()));
  const long long steps = step_count(opt.T, c.dt);
  const bool noisy = p.epsilon > 0.0;

  auto run = [&](int N, std::uint64_t seed) {
    ModelParams pn = p;
    pn.N = N;
    Integrator integrator(pn, c, N);
    std::optional<NoiseSource> noise;
    if (noisy) noise.emplace(seed, N);
    FourierField u = opt.initial ? resized(*opt.initial, N) : FourierField(N);
    for (long long s = 0; s < steps; ++s) integrator.advance(u, noise ? &*noise : nullptr);
    return u;
  };

  parallel_for(
      static_cast<std::size_t>(opt.realizations),
      [&](std::size_t r) {
        const std::uint64_t seed = derive_seed(c.seed, r);
        const FourierField ref = run(opt.N_reference, seed);
        for (std::size_t k = 0; k < opt.N_list.size(); ++k)
          out.gaps[r][k] = holder_gap(run(opt.N_list[k], seed), ref, opt.alpha);
      },
      c.threads);

  out.mean_gap.assign(opt.N_list.size(), 0.0);
  for (const auto& row : out.gaps)
    for (std::size_t k = 0; k < row.size(); ++k) out.mean_gap[k] += row[k] / opt.realizations;

  // Least-squares slope of log gap vs log N over the strictly positive gaps.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < opt.N_list.size(); ++k) {
    if (!(out.mean_gap[k] > 0.0)) continue;
    const double x = std::log(double(opt.N_list[k]));
    const double y = std::log(out.mean_gap[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  out.fitted_exponent = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  return out;
}

double binomial_two_sided_p(int k, int n) {
  if (n <= 0 || k < 0 || k > n) throw std::invalid_argument("binomial_two_sided_p: need 0 <= k <= n, n > 0");
  const boost::math::binomial_distribution<double> dist(n, 0.5);
  const int lo = std::min(k, n - k);
  return std::min(1.0, 2.0 * boost::math::cdf(dist, lo));
}

double coefficient_of_variation(std::span<const double> x) {
  if (x.size() < 2) return std::nan("");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1)) / mean;
}

}  // namespace sgmeta
