// Complete elliptic integrals and Jacobi elliptic functions, parameter
// convention m = k² throughout.
#pragma once

#include <stdexcept>

namespace sgmeta {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Largest parameter accepted for K(m) and the Jacobi functions. Closer to 1
/// the AGM loses relative accuracy in K, so we refuse instead.
inline constexpr double max_elliptic_parameter = 1.0 - 1e-12;

/// K(m) = ∫₀^{π/2} (1 − m sin²θ)^{−1/2} dθ via the arithmetic-geometric mean.
double complete_K(double m);

/// E(m) = ∫₀^{π/2} (1 − m sin²θ)^{1/2} dθ, 0 <= m <= 1.
double complete_E(double m);

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

/// sn, cn, dn by descending Landen transformation (AGM scale).
JacobiTriple jacobi_sncndn(double x, double m);

/// cd(x, m) = cn/dn; period 4K(m), cd(0, m) = 1.
double jacobi_cd(double x, double m);

}  // namespace sgmeta
