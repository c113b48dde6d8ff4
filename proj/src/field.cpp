#include "sgmeta/field.hpp"

#include "fft.hpp"
#include "sgmeta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sgmeta {

namespace {
constexpr double pi = std::numbers::pi;
const double sqrt_two_pi = std::sqrt(2.0 * pi);

void require_same_truncation(const FourierField& a, const FourierField& b) {
  if (a.truncation() != b.truncation())
    throw std::invalid_argument("fields have different truncations: " +
                                std::to_string(a.truncation()) + " vs " +
                                std::to_string(b.truncation()));
}

int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}
}  // namespace

FourierField::FourierField(int N) : N_(N), coeffs_(static_cast<std::size_t>(2 * N + 1), 0.0) {
  if (N < 0) throw std::invalid_argument("truncation must be nonnegative");
}

FourierField::FourierField(int N, std::vector<double> coeffs) : N_(N), coeffs_(std::move(coeffs)) {
  if (N < 0) throw std::invalid_argument("truncation must be nonnegative");
  if (coeffs_.size() != static_cast<std::size_t>(2 * N + 1))
    throw std::invalid_argument("expected 2N+1 = " + std::to_string(2 * N + 1) +
                                " coefficients, got " + std::to_string(coeffs_.size()));
}

FourierField FourierField::constant(int N, double value) {
  FourierField u(N);
  u.at(0) = value;
  return u;
}

FourierField FourierField::mode(int N, int n, double amplitude) {
  if (std::abs(n) > N) throw std::invalid_argument("wavenumber exceeds truncation");
  FourierField u(N);
  u.at(n) = amplitude;
  return u;
}

FourierField& FourierField::operator+=(const FourierField& other) {
  require_same_truncation(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& other) {
  require_same_truncation(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

FourierField& FourierField::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

double inner(const FourierField& a, const FourierField& b) {
  require_same_truncation(a, b);
  double sum = 2.0 * pi * a.at(0) * b.at(0);
  for (int n = 1; n <= a.truncation(); ++n) sum += a.at(n) * b.at(n) + a.at(-n) * b.at(-n);
  return sum;
}

double l2_norm(const FourierField& u) { return std::sqrt(inner(u, u)); }

FourierField resized(const FourierField& u, int N) {
  FourierField out(N);
  const int K = std::min(N, u.truncation());
  for (int n = -K; n <= K; ++n) out.at(n) = u.at(n);
  return out;
}

FourierField derivative(const FourierField& u) {
  const int N = u.truncation();
  FourierField d(N);
  for (int n = 1; n <= N; ++n) {
    d.at(n) = n * u.at(-n);
    d.at(-n) = -n * u.at(n);
  }
  return d;
}

void ModelParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  if (confining_k < 1) throw std::invalid_argument("confining_k must be a positive integer");
}

void ModelParams::require_regime() const {
  validate();
  if (std::abs(gamma_beta() - 1.0) < 1e-12)
    throw RegimeError("γβ = 1 bifurcation: no regime applies");
}

int dealiased_grid_size(int N) { return next_pow2(4 * (2 * N + 1)); }

std::vector<double> evaluate_on_grid(const FourierField& u, int M) {
  if (M < static_cast<int>(u.size())) throw std::invalid_argument("undersampled");
  std::vector<double> out(static_cast<std::size_t>(M));
  detail::synthesize(u.coeffs(), u.truncation(), out);
  return out;
}

FourierField grid_to_fourier(std::span<const double> values, int N) {
  FourierField u(N);
  detail::analyze(values, N, u.coeffs());
  return u;
}

double confining_threshold(const ModelParams& p) {
  return p.confining_k * 2.0 * pi / p.beta;
}

double potential(const FourierField& u, const ModelParams& p) {
  const int N = u.truncation();
  double gradient_term = 0.0;
  for (int n = 1; n <= N; ++n)
    gradient_term += 0.5 * double(n) * n * (u.at(n) * u.at(n) + u.at(-n) * u.at(-n));

  const int M = dealiased_grid_size(N);
  const auto values = evaluate_on_grid(u, M);
  double cos_sum = 0.0;
  for (double v : values) cos_sum += std::cos(p.beta * v);
  const double cos_term = -(p.gamma / p.beta) * cos_sum * (2.0 * pi / M);

  const double excess = std::max(0.0, std::abs(u.at(0)) - confining_threshold(p));
  return gradient_term + cos_term + excess * excess;
}

FourierField reaction_gradient(const FourierField& u, const ModelParams& p) {
  const int N = u.truncation();
  auto values = evaluate_on_grid(u, dealiased_grid_size(N));
  for (double& v : values) v = p.gamma * std::sin(p.beta * v);
  FourierField g = grid_to_fourier(values, N);
  const double mean = u.at(0);
  const double excess = std::max(0.0, std::abs(mean) - confining_threshold(p));
  if (excess > 0.0) g.at(0) += 2.0 * excess * (mean > 0 ? 1.0 : -1.0) / (2.0 * pi);
  return g;
}

FourierField gradient(const FourierField& u, const ModelParams& p) {
  FourierField g = reaction_gradient(u, p);
  for (int n = 1; n <= u.truncation(); ++n) {
    g.at(n) += double(n) * n * u.at(n);
    g.at(-n) += double(n) * n * u.at(-n);
  }
  return g;
}

Eigen::MatrixXd hessian_matrix(const FourierField& u, const ModelParams& p) {
  const int N = u.truncation();
  const int dim = 2 * N + 1;
  auto values = evaluate_on_grid(u, dealiased_grid_size(N));
  for (double& v : values) v = p.gamma_beta() * std::cos(p.beta * v);
  // Basis coefficients of the potential γβ cos(βu) up to 2N, converted to
  // normalized cosine/sine moments (1/2π)∫V cos(kx), (1/2π)∫V sin(kx).
  std::vector<double> vhat(static_cast<std::size_t>(4 * N + 1));
  detail::analyze(values, 2 * N, vhat);
  const double to_moment = 1.0 / (2.0 * std::sqrt(pi));
  auto vc = [&](int k) {
    k = std::abs(k);
    return k == 0 ? vhat[static_cast<std::size_t>(2 * N)]
                  : to_moment * vhat[static_cast<std::size_t>(2 * N + k)];
  };
  auto vs = [&](int k) {
    if (k == 0) return 0.0;
    const double s = to_moment * vhat[static_cast<std::size_t>(2 * N - std::abs(k))];
    return k > 0 ? s : -s;
  };

  Eigen::MatrixXd H(dim, dim);
  const double sqrt2 = std::sqrt(2.0);
  for (int a = -N; a <= N; ++a) {
    for (int b = a; b <= N; ++b) {
      double h;
      if (a == 0 && b == 0) {
        h = vc(0);
      } else if (a == 0 || b == 0) {
        const int k = a == 0 ? b : a;
        h = sqrt2 * (k > 0 ? vc(k) : vs(-k));
      } else if (a > 0 && b > 0) {
        h = vc(a - b) + vc(a + b);
      } else if (a < 0 && b < 0) {
        h = vc(a - b) - vc(-a - b);
      } else {
        // one cosine index c > 0 and one sine index s > 0
        const int c = a > 0 ? a : b;
        const int s = a > 0 ? -b : -a;
        h = vs(c + s) + vs(s - c);
      }
      H(a + N, b + N) = h;
      H(b + N, a + N) = h;
    }
    H(a + N, a + N) += double(a) * a;
  }
  if (std::abs(u.at(0)) > confining_threshold(p)) H(N, N) += 1.0 / pi;
  return H;
}

Eigen::VectorXd to_orthonormal(const FourierField& u) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(u.size()));
  for (int n = -u.truncation(); n <= u.truncation(); ++n) w(n + u.truncation()) = u.at(n);
  w(u.truncation()) *= sqrt_two_pi;
  return w;
}

FourierField from_orthonormal(const Eigen::VectorXd& w, int N) {
  if (w.size() != 2 * N + 1) throw std::invalid_argument("vector length must be 2N+1");
  FourierField u(N);
  for (int n = -N; n <= N; ++n) u.at(n) = w(n + N);
  u.at(0) /= sqrt_two_pi;
  return u;
}

double besov_norm(const FourierField& u, double s) {
  const int N = u.truncation();
  double norm = std::abs(u.at(0));
  if (N == 0) return norm;
  int M = 1;
  while (M < 8 * (2 * N + 1)) M <<= 1;
  std::vector<double> grid(static_cast<std::size_t>(M));
  for (int j = 0; (1 << j) <= N; ++j) {
    const int lo = 1 << j;
    const int hi = std::min(N, (1 << (j + 1)) - 1);
    FourierField block(N);
    for (int n = lo; n <= hi; ++n) {
      block.at(n) = u.at(n);
      block.at(-n) = u.at(-n);
    }
    detail::synthesize(block.coeffs(), N, grid);
    double sup = 0.0;
    for (double v : grid) sup = std::max(sup, std::abs(v));
    norm = std::max(norm, std::pow(2.0, j * s) * sup);
  }
  return norm;
}

FourierField translate(const FourierField& u, double t) {
  const int N = u.truncation();
  FourierField out(N);
  out.at(0) = u.at(0);
  for (int n = 1; n <= N; ++n) {
    const double c = std::cos(n * t);
    const double s = std::sin(n * t);
    const double a = u.at(n);
    const double b = u.at(-n);
    out.at(n) = c * a - s * b;
    out.at(-n) = s * a + c * b;
  }
  return out;
}

MeanOscSplit split_mean_osc(const FourierField& u) {
  MeanOscSplit split{u.at(0), u};
  split.osc.at(0) = 0.0;
  return split;
}

}  // namespace sgmeta
