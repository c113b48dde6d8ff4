// Hessian eigendecomposition, signature classification and log-space
// determinant ratios.
#pragma once

#include "sgmeta/field.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace sgmeta {

struct SpectrumReport {
  /// Ascending, length 2N+1.
  Eigen::VectorXd eigenvalues;
  /// Orthonormal eigenvectors (columns) in orthonormal Fourier coordinates.
  Eigen::MatrixXd eigenvectors;
  /// −λ_min when λ_min is negative (and not classified as zero).
  std::optional<double> mu;
  std::vector<int> negative_indices;
  std::vector<int> zero_indices;
  /// Cosine of the angle between ∂ₓu and the zero eigenspace; present when
  /// there is a zero mode and u is not constant.
  std::optional<double> zero_vector_overlap;
  double zero_threshold = 0.0;
  /// max_k ‖H v_k − λ_k v_k‖ / ‖H‖.
  double max_relative_residual = 0.0;

  int neg_count() const { return static_cast<int>(negative_indices.size()); }
  int zero_count() const { return static_cast<int>(zero_indices.size()); }
  /// Eigenvalues that are neither negative nor zero.
  std::vector<double> positive_eigenvalues() const;
};

/// |λ| below this counts as zero: 1e-8 · max(1, λ_max).
double zero_eigenvalue_threshold(const Eigen::VectorXd& sorted_eigenvalues);

SpectrumReport spectrum_at(const FourierField& u, const ModelParams& p);

/// Σ log(num) − Σ log(den). Throws std::invalid_argument naming the first
/// nonpositive entry.
double log_product_ratio(std::span<const double> num, std::span<const double> den);

/// Reference spectrum {n² + γβ : |n| <= N} of −Δ + γβ.
std::vector<double> reference_eigenvalues(double gamma_beta, int N);

}  // namespace sgmeta
