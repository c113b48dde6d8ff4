#include "sgmeta/stationary.hpp"

#include "sgmeta/elliptic.hpp"
#include "sgmeta/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgmeta {

namespace {
constexpr double pi = std::numbers::pi;

double oscillation_norm(const FourierField& u) { return l2_norm(split_mean_osc(u).osc); }

int dominant_harmonic(const FourierField& u) {
  int best = 1;
  double amp = -1.0;
  for (int n = 1; n <= u.truncation(); ++n) {
    const double a = std::hypot(u.at(n), u.at(-n));
    if (a > amp) {
      amp = a;
      best = n;
    }
  }
  return best;
}

// Rotates the j-th harmonic onto the positive cosine axis.
FourierField align_phase(const FourierField& u, int j) {
  const double theta = std::atan2(u.at(-j), u.at(j));
  return translate(u, -theta / j);
}

void classify(StationaryPoint& s, const ModelParams& p) {
  const auto spec = spectrum_at(s.field, p);
  s.neg_count = spec.neg_count();
  s.zero_count = spec.zero_count();
  s.energy = potential(s.field, p);
  const double scale = 1.0 + std::abs(s.field.at(0));
  if (s.neg_count == 0)
    s.kind = StationaryKind::minimum;
  else if (oscillation_norm(s.field) < 1e-8 * scale)
    s.kind = StationaryKind::constant_saddle;
  else
    s.kind = StationaryKind::elliptic_saddle;
}
}  // namespace

std::string to_string(StationaryKind kind) {
  switch (kind) {
    case StationaryKind::minimum: return "minimum";
    case StationaryKind::constant_saddle: return "constant-saddle";
    case StationaryKind::elliptic_saddle: return "elliptic-saddle";
  }
  return "unknown";
}

double solve_modulus_for_period(double gamma_beta, int j) {
  if (!(gamma_beta > 0.0) || j < 1) throw std::invalid_argument("need gamma*beta > 0 and j >= 1");
  if (std::sqrt(gamma_beta) <= j)
    throw std::invalid_argument("no such orbit: sqrt(gamma*beta) = " + std::to_string(std::sqrt(gamma_beta)) +
                                " <= j = " + std::to_string(j));
  const double target = pi * std::sqrt(gamma_beta) / (2.0 * j);
  double lo = 0.0;
  double hi = max_elliptic_parameter;
  if (complete_K(hi) < target)
    throw DomainError("period condition needs m closer to 1 than " + std::to_string(hi));

  double m = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double k = complete_K(m);
    const double f = k - target;
    if (std::abs(f) < 1e-13) return m;
    (f > 0.0 ? hi : lo) = m;
    // Newton with dK/dm = (E − (1−m)K) / (2m(1−m)), kept inside the bracket.
    const double dk = (complete_E(m) - (1.0 - m) * k) / (2.0 * m * (1.0 - m));
    double next = m - f / dk;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == m) return m;
    m = next;
  }
  return m;
}

FourierField elliptic_formula(const ModelParams& p, int j, int N) {
  const double gb = p.gamma_beta();
  const double m = solve_modulus_for_period(gb, j);
  const double sqrt_m = std::sqrt(m);
  const double omega = std::sqrt(gb);
  const int M = std::max(dealiased_grid_size(N), 4096);
  std::vector<double> values(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    const double x = 2.0 * pi * i / M;
    values[static_cast<std::size_t>(i)] = (pi + 2.0 * std::asin(sqrt_m * jacobi_cd(omega * x, m))) / p.beta;
  }
  return grid_to_fourier(values, N);
}

StationaryPoint newton_refine(const FourierField& u0, const ModelParams& p, const NewtonOptions& opt) {
  p.validate();
  const int N = u0.truncation();
  const int dim = 2 * N + 1;

  int pin = 0;
  if (opt.pinning == NewtonOptions::Pinning::harmonic) {
    pin = opt.pin_harmonic;
  } else if (opt.pinning == NewtonOptions::Pinning::automatic && p.gamma_beta() > 1.0 &&
             oscillation_norm(u0) > 1e-6 * (1.0 + std::abs(u0.at(0)))) {
    pin = dominant_harmonic(u0);
  }
  if (pin < 0 || pin > N) throw std::invalid_argument("pinned harmonic outside the truncation");

  StationaryPoint s;
  FourierField u = pin ? align_phase(u0, pin) : u0;
  FourierField G = gradient(u, p);
  double r = l2_norm(G);
  bool converged = false;

  for (int it = 0;; ++it) {
    s.residual_history.push_back(r);
    if (r < opt.tolerance) {
      converged = true;
      break;
    }
    if (it == opt.max_iterations) break;

    const Eigen::MatrixXd H = hessian_matrix(u, p);
    const Eigen::VectorXd g = to_orthonormal(G);
    Eigen::VectorXd dw;
    if (pin) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
      A.topLeftCorner(dim, dim) = H;
      Eigen::VectorXd t = to_orthonormal(derivative(u));
      t /= std::max(t.norm(), 1e-300);
      A.col(dim).head(dim) = t;
      A(dim, N - pin) = 1.0;
      Eigen::VectorXd rhs(dim + 1);
      rhs.head(dim) = -g;
      rhs(dim) = -u.at(-pin);
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
      if (lu.rcond() < 1e-14) throw ConvergenceError("bordered Newton system is singular", s.residual_history);
      dw = lu.solve(rhs).head(dim);
    } else {
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(H);
      if (lu.rcond() < 1e-14) throw ConvergenceError("Hessian is singular; cannot take a Newton step", s.residual_history);
      dw = lu.solve(-g);
    }
    if (!dw.allFinite()) throw ConvergenceError("Newton step is not finite", s.residual_history);
    const FourierField du = from_orthonormal(dw, N);

    // Backtrack on the residual norm.
    double step = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings <= 10; ++halvings, step *= 0.5) {
      FourierField trial = u + step * du;
      FourierField Gt = gradient(trial, p);
      const double rt = l2_norm(Gt);
      if (rt < r) {
        const bool stalling = rt > 0.5 * r && r < opt.stall_tolerance;
        u = std::move(trial);
        G = std::move(Gt);
        r = rt;
        accepted = true;
        if (stalling) {
          s.residual_history.push_back(r);
          converged = true;
        }
        break;
      }
    }
    if (converged) break;
    if (!accepted) {
      converged = r < opt.stall_tolerance;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("Newton iteration did not converge; final residual " + std::to_string(r),
                           s.residual_history);

  s.field = std::move(u);
  s.residual = r;
  if (pin) {
    s.harmonic = pin;
    const double c = std::cos(p.beta * evaluate_on_grid(s.field, dealiased_grid_size(N))[0] / 2.0);
    s.modulus = c * c;
  }
  classify(s, p);
  return s;
}

StationaryPoint elliptic_saddle(const ModelParams& p, int j) {
  const double m = solve_modulus_for_period(p.gamma_beta(), j);
  NewtonOptions opt;
  opt.pinning = NewtonOptions::Pinning::harmonic;
  opt.pin_harmonic = j;
  auto s = newton_refine(elliptic_formula(p, j, p.N), p, opt);
  s.modulus = m;
  return s;
}

std::vector<StationaryPoint> enumerate_saddles(const ModelParams& p) {
  p.require_regime();
  std::vector<StationaryPoint> out;
  NewtonOptions constant;
  constant.pinning = NewtonOptions::Pinning::none;
  out.push_back(newton_refine(FourierField::constant(p.N, pi / p.beta), p, constant));
  const double root = std::sqrt(p.gamma_beta());
  for (int j = 1; j < root && j <= p.N; ++j) {
    if (std::abs(root - j) < 1e-12 * j) continue;
    out.push_back(elliptic_saddle(p, j));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const StationaryPoint& a, const StationaryPoint& b) { return a.energy < b.energy; });
  return out;
}

double phase_energy(double gamma, double beta, double u, double du) {
  return 0.5 * du * du + (gamma / beta) * std::cos(beta * u);
}

std::vector<PhaseOrbit> phase_portrait_data(double gamma_beta, const PhaseGrid& grid) {
  if (!(gamma_beta > 0.0) || !(grid.beta > 0.0)) throw std::invalid_argument("gamma*beta and beta must be positive");
  if (grid.samples_per_branch < 2) throw std::invalid_argument("need at least 2 samples per branch");
  const double beta = grid.beta;
  const double gamma = gamma_beta / beta;
  const double a = gamma / beta;
  std::vector<PhaseOrbit> orbits;

  auto branch_speed = [&](double level, double u) {
    return std::sqrt(std::max(0.0, 2.0 * (level - a * std::cos(beta * u))));
  };
  // Upper branch left to right, lower branch right to left, so each orbit is
  // traced as one closed curve.
  auto trace = [&](PhaseOrbit& o, double u_lo, double u_hi, bool chebyshev) {
    const int n = grid.samples_per_branch;
    auto node = [&](int i) {
      const double t = double(i) / (n - 1);
      const double s = chebyshev ? 0.5 * (1.0 - std::cos(pi * t)) : t;
      return u_lo + (u_hi - u_lo) * s;
    };
    for (int i = 0; i < n; ++i) {
      const double u = node(i);
      o.u.push_back(u);
      o.du.push_back(branch_speed(o.level, u));
    }
    for (int i = n - 1; i >= 0; --i) {
      const double u = node(i);
      o.u.push_back(u);
      o.du.push_back(-branch_speed(o.level, u));
    }
  };

  int id = 0;
  orbits.push_back({id++, "center", -a, {pi / beta}, {0.0}});
  for (int k = 1; k <= grid.inner_levels; ++k) {
    PhaseOrbit o{id++, "periodic", -a + 2.0 * a * k / (grid.inner_levels + 1), {}, {}};
    const double turn = std::acos(o.level / a) / beta;
    trace(o, turn, 2.0 * pi / beta - turn, true);
    orbits.push_back(std::move(o));
  }
  PhaseOrbit hetero{id++, "heteroclinic", a, {}, {}};
  trace(hetero, 0.0, 2.0 * pi / beta, false);
  orbits.push_back(std::move(hetero));
  for (int k = 1; k <= grid.outer_levels; ++k) {
    PhaseOrbit o{id++, "rotating", a + grid.outer_spacing * a * k, {}, {}};
    trace(o, 0.0, 2.0 * pi / beta, false);
    orbits.push_back(std::move(o));
  }
  return orbits;
}

}  // namespace sgmeta
