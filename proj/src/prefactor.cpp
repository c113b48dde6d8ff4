#include "sgmeta/prefactor.hpp"

#include "sgmeta/elliptic.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgmeta {

namespace {
constexpr double pi = std::numbers::pi;

void require_noninteger_root(double gamma_beta) {
  const double root = std::sqrt(gamma_beta);
  if (std::abs(root - std::round(root)) < 1e-12 * std::max(1.0, root))
    throw std::invalid_argument("sqrt(gamma*beta) is an integer: the determinant is degenerate");
}

// det(I − H(2π)) for y'' = s·γβ·y with H(0) = I.
double boundary_determinant(double gamma_beta, double s) {
  using State = std::array<double, 4>;  // y1, y1', y2, y2'
  State x{1.0, 0.0, 0.0, 1.0};
  auto rhs = [&](const State& v, State& dv, double) {
    dv[0] = v[1];
    dv[1] = s * gamma_beta * v[0];
    dv[2] = v[3];
    dv[3] = s * gamma_beta * v[2];
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(1e-15, 1e-15, ode::runge_kutta_fehlberg78<State>());
  ode::integrate_adaptive(stepper, rhs, x, 0.0, 2.0 * pi, 1e-3);
  // H(2π) = [[y1, y2], [y1', y2']].
  return (1.0 - x[0]) * (1.0 - x[3]) - x[2] * x[1];
}
}  // namespace

std::string to_string(Regime r) { return r == Regime::sub ? "sub" : "super"; }

std::string to_string(PrefactorMethod m) {
  return m == PrefactorMethod::finite_n_product ? "finite-N product" : "closed form";
}

Regime regime_of(const ModelParams& p) {
  p.require_regime();
  return p.gamma_beta() < 1.0 ? Regime::sub : Regime::super;
}

double TransitionTimeEstimate::expected_time(double epsilon) const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return prefactor * std::exp(barrier / epsilon);
}

SubRegimePrefactor prefactor_sub(const ModelParams& p) {
  if (regime_of(p) != Regime::sub) throw RegimeError("prefactor_sub requires gamma*beta < 1");
  const double gb = p.gamma_beta();
  std::vector<double> num, den;
  num.reserve(static_cast<std::size_t>(2 * p.N));
  den.reserve(static_cast<std::size_t>(2 * p.N));
  for (int n = 1; n <= p.N; ++n) {
    for (int twice = 0; twice < 2; ++twice) {
      num.push_back(double(n) * n - gb);
      den.push_back(double(n) * n + gb);
    }
  }
  const double barrier = 4.0 * pi * p.gamma / p.beta;
  SubRegimePrefactor out;
  out.finite_n = {Regime::sub, PrefactorMethod::finite_n_product,
                  std::exp(0.5 * log_product_ratio(num, den)) / (2.0 * gb), barrier, p.N};
  const double root = std::sqrt(gb);
  out.closed_form = {Regime::sub, PrefactorMethod::closed_form,
                     std::sin(pi * root) / (2.0 * gb * std::sinh(pi * root)), barrier, std::nullopt};
  return out;
}

double manifold_length(const FourierField& u) {
  const double norm = l2_norm(derivative(u));
  if (norm == 0.0) throw std::invalid_argument("constant field has no saddle manifold");
  return 2.0 * pi * norm;
}

SuperRegimePrefactor prefactor_super(const ModelParams& p, const StationaryPoint& saddle, const SpectrumReport& spec) {
  if (regime_of(p) != Regime::super) throw RegimeError("prefactor_super requires gamma*beta > 1");
  if (spec.neg_count() != 1 || spec.zero_count() != 1 || !spec.mu)
    throw ClassificationError("prefactor_super needs exactly one negative and one zero eigenvalue; got " +
                              std::to_string(spec.neg_count()) + " negative, " +
                              std::to_string(spec.zero_count()) + " zero");
  const int N = saddle.field.truncation();
  SuperRegimePrefactor out;
  out.mu = *spec.mu;
  out.manifold_length = manifold_length(saddle.field);
  const auto positives = spec.positive_eigenvalues();
  const auto reference = reference_eigenvalues(p.gamma_beta(), N);
  out.log_determinant_ratio = log_product_ratio(positives, reference);
  const double du_norm = out.manifold_length / (2.0 * pi);
  const double log_sqrt = 0.5 * (std::log(2.0 * pi / out.mu) + out.log_determinant_ratio);
  const double barrier = potential(saddle.field, p) - potential(FourierField(N), p);
  out.estimate = {Regime::super, PrefactorMethod::finite_n_product, std::exp(log_sqrt) / (2.0 * du_norm), barrier, N};
  out.constant_saddle_barrier = 4.0 * pi * p.gamma / p.beta;
  const auto values = evaluate_on_grid(saddle.field, dealiased_grid_size(N));
  double mean = 0.0;
  for (double v : values) mean += std::cos(p.beta * v);
  out.potential_mean = p.gamma_beta() * mean / static_cast<double>(values.size());
  out.tail_corrected_prefactor = out.estimate.prefactor * std::exp((out.potential_mean - p.gamma_beta()) / N);
  return out;
}

SuperRegimePrefactor prefactor_super(const ModelParams& p) {
  if (regime_of(p) != Regime::super) throw RegimeError("prefactor_super requires gamma*beta > 1");
  const auto saddle = elliptic_saddle(p, 1);
  return prefactor_super(p, saddle, spectrum_at(saddle.field, p));
}

double DeterminantReport::value() const { return sign * std::exp(log_ratio); }

double gelfand_yaglom_closed_form(double gamma_beta) {
  const double root = std::sqrt(gamma_beta);
  const double r = std::sin(pi * root) / std::sinh(pi * root);
  return -r * r;
}

double gelfand_yaglom_ratio(double gamma_beta) {
  if (!(gamma_beta > 0.0)) throw std::invalid_argument("gamma*beta must be positive");
  require_noninteger_root(gamma_beta);
  const double ratio = boundary_determinant(gamma_beta, -1.0) / boundary_determinant(gamma_beta, 1.0);
  const double closed = gelfand_yaglom_closed_form(gamma_beta);
  if (std::abs(ratio - closed) > 1e-9 * std::abs(closed))
    throw std::runtime_error("ODE determinant " + std::to_string(ratio) + " disagrees with closed form " +
                             std::to_string(closed));
  return ratio;
}

DeterminantReport mckane_tarlie(const ModelParams& p) {
  p.validate();
  const double gb = p.gamma_beta();
  if (gb <= 1.0) throw RegimeError("mckane_tarlie requires gamma*beta > 1");
  require_noninteger_root(gb);
  const double m = solve_modulus_for_period(gb, 1);
  const double K = complete_K(m);
  const double E = complete_E(m);
  const double s = std::sinh(pi * std::sqrt(gb));
  const double numerator = 4.0 * std::pow(E + (m - 1.0) * K, 2);
  const double denominator = gb * (1.0 - m) * m * s * s;

  DeterminantReport r;
  r.sign = -1;
  r.log_ratio = std::log(numerator) - std::log(denominator);
  r.zero_removed = true;
  r.m = m;
  r.y1_norm_sq = 16.0 * std::sqrt(p.gamma) / std::pow(p.beta, 1.5) * (E - (1.0 - m) * K);
  r.y1_at_quarter = -2.0 * std::sqrt(p.gamma * m / std::sqrt(p.beta));
  r.y2_at_quarter = (E + (m - 1.0) * K) / (p.beta * (1.0 - m) * std::sqrt(m));
  r.y2_prime_at_quarter = -std::sqrt(p.gamma / (p.beta * m));
  return r;
}

DeterminantReport finite_n_determinant_ratio(const SpectrumReport& spec, double gamma_beta) {
  if (spec.zero_count() != 1 || spec.neg_count() != 1 || !spec.mu)
    throw ClassificationError("zero-removed determinant needs one negative and one zero eigenvalue");
  const int N = static_cast<int>(spec.eigenvalues.size() - 1) / 2;
  auto positives = spec.positive_eigenvalues();
  positives.push_back(*spec.mu);
  DeterminantReport r;
  r.sign = -1;
  r.log_ratio = log_product_ratio(positives, reference_eigenvalues(gamma_beta, N));
  r.zero_removed = true;
  r.N_used = N;
  return r;
}

}  // namespace sgmeta
