// Real fields on the 2π-torus in the sine-cosine basis, and the sine-Gordon
// potential with its gradient and Hessian.
//
// Basis convention: e_0 = 1 (unnormalized), e_{-n} = sin(nx)/√π,
// e_n = cos(nx)/√π. A constant field c therefore has coefficient û(0) = c,
// and ‖u‖² = 2π û(0)² + Σ_{n≠0} û(n)².
#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace sgmeta {

class FourierField {
 public:
  FourierField() = default;
  /// Zero field truncated at wavenumber N.
  explicit FourierField(int N);
  /// Takes coefficients ordered n = -N, ..., N; the length must be 2N+1.
  FourierField(int N, std::vector<double> coeffs);

  static FourierField constant(int N, double value);
  /// Single basis vector e_n scaled by `amplitude`.
  static FourierField mode(int N, int n, double amplitude = 1.0);

  int truncation() const { return N_; }
  std::size_t size() const { return coeffs_.size(); }

  /// Coefficient of wavenumber n, -N <= n <= N.
  double at(int n) const { return coeffs_[static_cast<std::size_t>(n + N_)]; }
  double& at(int n) { return coeffs_[static_cast<std::size_t>(n + N_)]; }

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  FourierField& operator+=(const FourierField& other);
  FourierField& operator-=(const FourierField& other);
  FourierField& operator*=(double s);

  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(FourierField a, double s) { return a *= s; }
  friend FourierField operator*(double s, FourierField a) { return a *= s; }

  bool operator==(const FourierField&) const = default;

 private:
  int N_ = 0;
  std::vector<double> coeffs_{0.0};
};

/// L² inner product on the torus (Parseval weights 2π on the zero mode).
double inner(const FourierField& a, const FourierField& b);
double l2_norm(const FourierField& u);
/// Truncates or zero-pads to wavenumber N.
FourierField resized(const FourierField& u, int N);
/// Spatial derivative ∂ₓu.
FourierField derivative(const FourierField& u);

struct ModelParams {
  double gamma = 1.0;
  double beta = 1.0;
  double epsilon = 0.1;
  int N = 16;
  int confining_k = 1;

  double gamma_beta() const { return gamma * beta; }
  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
  /// As validate(), and additionally rejects the bifurcation point γβ = 1
  /// with RegimeError.
  void require_regime() const;
};

struct MeanOscSplit {
  double mean = 0.0;
  FourierField osc;
};

/// Grid used for every nonlinear evaluation at truncation N: at least
/// 4(2N+1) points, rounded up to a power of two.
int dealiased_grid_size(int N);

/// Values u(2πj/M), j = 0..M-1. Throws std::invalid_argument("undersampled")
/// when M < 2N+1.
std::vector<double> evaluate_on_grid(const FourierField& u, int M);
/// Projection of grid samples onto wavenumbers |n| <= N.
FourierField grid_to_fourier(std::span<const double> values, int N);

/// k·2π/β, where the confining term of the potential switches on.
double confining_threshold(const ModelParams& p);

/// F[u] = ∫ |∇u|²/2 − (γ/β) cos(βu) dx + max(0, |û(0)| − k·2π/β)².
double potential(const FourierField& u, const ModelParams& p);

/// Non-Laplacian part of the L² gradient: Π_N γ sin(βu) plus the confining
/// force on the zero mode.
FourierField reaction_gradient(const FourierField& u, const ModelParams& p);

/// L² gradient of F, i.e. the field G with dF[u](v) = ⟨G, v⟩.
FourierField gradient(const FourierField& u, const ModelParams& p);

/// Hessian of F in the orthonormal basis (zero mode rescaled by √(2π)),
/// rows/columns ordered n = -N..N. Symmetric by construction.
Eigen::MatrixXd hessian_matrix(const FourierField& u, const ModelParams& p);

/// Maps coefficients to orthonormal coordinates (û(0) → √(2π) û(0)) and back.
Eigen::VectorXd to_orthonormal(const FourierField& u);
FourierField from_orthonormal(const Eigen::VectorXd& w, int N);

/// Besov B^s_{∞,∞} norm with sharp dyadic blocks: block −1 is the mean
/// (weight 1), block j collects 2^j <= |n| < 2^{j+1} and carries weight 2^{js}.
double besov_norm(const FourierField& u, double s);

/// Coefficients of x ↦ u(x − t).
FourierField translate(const FourierField& u, double t);

MeanOscSplit split_mean_osc(const FourierField& u);

}  // namespace sgmeta
