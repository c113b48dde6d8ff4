// Eyring–Kramers prefactors for both regimes and the functional
// determinants behind them.
#pragma once

#include "sgmeta/errors.hpp"
#include "sgmeta/field.hpp"
#include "sgmeta/spectrum.hpp"
#include "sgmeta/stationary.hpp"

#include <optional>
#include <string>

namespace sgmeta {

enum class Regime { sub, super };
enum class PrefactorMethod { finite_n_product, closed_form };

std::string to_string(Regime r);
std::string to_string(PrefactorMethod m);

/// Regime of γβ; throws RegimeError at γβ = 1.
Regime regime_of(const ModelParams& p);

struct TransitionTimeEstimate {
  Regime regime = Regime::sub;
  PrefactorMethod method = PrefactorMethod::finite_n_product;
  /// ε-independent factor in front of exp(ΔF/ε).
  double prefactor = 0.0;
  /// ΔF = F(saddle) − F(minimum).
  double barrier = 0.0;
  std::optional<int> N_used;

  /// Mean time to reach either neighbouring well: prefactor · exp(ΔF/ε).
  double expected_time(double epsilon) const;
  /// Mean time to reach one given neighbour (half the rate).
  double expected_time_one_sided(double epsilon) const { return 2.0 * expected_time(epsilon); }
  double rate(double epsilon) const { return 1.0 / expected_time(epsilon); }
  double rate_one_sided(double epsilon) const { return 0.5 * rate(epsilon); }
};

struct SubRegimePrefactor {
  TransitionTimeEstimate finite_n;
  TransitionTimeEstimate closed_form;
};

/// (1/(2γβ)) √(Π_{0<|n|<=N} (n²−γβ)/(n²+γβ)) and its N → ∞ limit
/// sin(π√γβ) / (2γβ sinh(π√γβ)); barrier 4πγ/β. Requires γβ < 1.
SubRegimePrefactor prefactor_sub(const ModelParams& p);

/// ℓ = 2π ‖∂ₓu‖_{L²}. Throws std::invalid_argument for constant fields.
double manifold_length(const FourierField& u);

struct SuperRegimePrefactor {
  TransitionTimeEstimate estimate;
  double mu = 0.0;
  double manifold_length = 0.0;
  /// log(Π λ_k / Π_{|n|<=N}(n²+γβ)) over the positive eigenvalues.
  double log_determinant_ratio = 0.0;
  /// Spatial mean of γβ cos(βu_*). Hessian eigenvalues approach
  /// n² + this mean, so the truncated product carries an O(1/N) error.
  double potential_mean = 0.0;
  /// prefactor · exp((potential_mean − γβ)/N): the product with its
  /// asymptotic tail over |n| > N restored.
  double tail_corrected_prefactor = 0.0;
  /// F(constant saddle) − F(minimum) = 4πγ/β, the exponent as printed for
  /// this regime, kept for comparison with the numerical barrier.
  double constant_saddle_barrier = 0.0;
};

/// 1/(2‖∂ₓu_*‖) √((2π/μ) Π λ_k / Π(n²+γβ)) with the numerical barrier
/// F(u_*) − F(0). Throws RegimeError if γβ <= 1 and ClassificationError
/// unless the spectrum has exactly one negative and one zero eigenvalue.
SuperRegimePrefactor prefactor_super(const ModelParams& p, const StationaryPoint& saddle, const SpectrumReport& spec);

/// Convenience: refine the j = 1 saddle at p.N and assemble the estimate.
SuperRegimePrefactor prefactor_super(const ModelParams& p);

struct DeterminantReport {
  /// log |ratio|.
  double log_ratio = 0.0;
  /// Sign of the ratio (±1).
  int sign = 1;
  bool zero_removed = false;
  std::optional<double> m;
  std::optional<int> N_used;
  /// Closed-form intermediate quantities (zero-removed case only).
  std::optional<double> y1_norm_sq;
  std::optional<double> y1_at_quarter;
  std::optional<double> y2_at_quarter;
  std::optional<double> y2_prime_at_quarter;

  double value() const;
};

/// det(−Δ−γβ)/det(−Δ+γβ) from the 2×2 boundary-value determinants of the
/// homogeneous ODEs y'' = ∓γβ y integrated numerically over [0, 2π].
/// Throws std::invalid_argument at integer √(γβ), and std::runtime_error if
/// the result strays from −sin²/sinh² by more than 1e-9 relative.
double gelfand_yaglom_ratio(double gamma_beta);

/// −sin²(π√γβ) / sinh²(π√γβ).
double gelfand_yaglom_closed_form(double gamma_beta);

/// Zero-mode-removed determinant det'Λ/det(−Δ+γβ) at the kink–antikink
/// saddle, closed form in K(m), E(m). Requires γβ > 1.
DeterminantReport mckane_tarlie(const ModelParams& p);

/// The same ratio from a finite-N spectrum: (−μ Π' λ_k) / Π_{|n|<=N}(n²+γβ)
/// with the zero eigenvalue removed and the negative one retained.
DeterminantReport finite_n_determinant_ratio(const SpectrumReport& spec, double gamma_beta);

}  // namespace sgmeta
