#include "sgmeta/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sgmeta {

std::vector<double> SpectrumReport::positive_eigenvalues() const {
  std::vector<double> out;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    const int i = static_cast<int>(k);
    if (std::find(negative_indices.begin(), negative_indices.end(), i) != negative_indices.end()) continue;
    if (std::find(zero_indices.begin(), zero_indices.end(), i) != zero_indices.end()) continue;
    out.push_back(eigenvalues(k));
  }
  return out;
}

double zero_eigenvalue_threshold(const Eigen::VectorXd& sorted_eigenvalues) {
  const double top = sorted_eigenvalues.size() ? sorted_eigenvalues(sorted_eigenvalues.size() - 1) : 0.0;
  return 1e-8 * std::max(1.0, top);
}

SpectrumReport spectrum_at(const FourierField& u, const ModelParams& p) {
  const Eigen::MatrixXd H = hessian_matrix(u, p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver failed");

  SpectrumReport r;
  r.eigenvalues = solver.eigenvalues();
  r.eigenvectors = solver.eigenvectors();
  r.zero_threshold = zero_eigenvalue_threshold(r.eigenvalues);
  for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k) {
    const double lambda = r.eigenvalues(k);
    if (std::abs(lambda) < r.zero_threshold)
      r.zero_indices.push_back(static_cast<int>(k));
    else if (lambda < 0.0)
      r.negative_indices.push_back(static_cast<int>(k));
  }
  if (!r.negative_indices.empty()) r.mu = -r.eigenvalues(r.negative_indices.front());

  const double h_norm = std::max(H.norm(), 1e-300);
  for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k) {
    const double res = (H * r.eigenvectors.col(k) - r.eigenvalues(k) * r.eigenvectors.col(k)).norm();
    r.max_relative_residual = std::max(r.max_relative_residual, res / h_norm);
  }

  const Eigen::VectorXd du = to_orthonormal(derivative(u));
  if (!r.zero_indices.empty() && du.norm() > 0.0) {
    double proj2 = 0.0;
    for (int k : r.zero_indices) {
      const double c = r.eigenvectors.col(k).dot(du);
      proj2 += c * c;
    }
    r.zero_vector_overlap = std::sqrt(proj2) / du.norm();
  }
  return r;
}

double log_product_ratio(std::span<const double> num, std::span<const double> den) {
  auto sum_logs = [](std::span<const double> xs, const char* which) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!(xs[i] > 0.0))
        throw std::invalid_argument(std::string(which) + "[" + std::to_string(i) +
                                    "] = " + std::to_string(xs[i]) + " is not positive");
      s += std::log(xs[i]);
    }
    return s;
  };
  return sum_logs(num, "num") - sum_logs(den, "den");
}

std::vector<double> reference_eigenvalues(double gamma_beta, int N) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * N + 1));
  for (int n = -N; n <= N; ++n) out.push_back(double(n) * n + gamma_beta);
  return out;
}

}  // namespace sgmeta
