#include "sgmeta/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace sgmeta {

namespace {

void check_parameter(double m, double upper, const char* what) {
  if (!(m >= 0.0) || m > upper)
    throw DomainError(std::string(what) + ": parameter m = " + std::to_string(m) +
                      " outside [0, " + std::to_string(upper) + "]");
}

constexpr int max_agm_steps = 64;

}  // namespace

double complete_K(double m) {
  check_parameter(m, max_elliptic_parameter, "complete_K");
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  for (int i = 0; i < max_agm_steps && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

double complete_E(double m) {
  check_parameter(m, 1.0, "complete_E");
  if (m == 1.0) return 1.0;
  // E = K (1 − Σ 2^{n−1} c_n²), c_0² = m. The recurrence c_{n+1} = c_n²/(4a_{n+1})
  // avoids the a − b cancellation that would stall c at one ulp.
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  double c = std::sqrt(m);
  double sum = 0.5 * m;
  double weight = 0.5;
  for (int i = 0; i < max_agm_steps && c > 1e-300; ++i) {
    const double an = 0.5 * (a + b);
    c = c * c / (4.0 * an);
    b = std::sqrt(a * b);
    a = an;
    weight *= 2.0;
    sum += weight * c * c;
    if (weight * c * c < 1e-18 * sum) break;
  }
  const double K = std::numbers::pi / (2.0 * a);
  return K * (1.0 - sum);
}

JacobiTriple jacobi_sncndn(double x, double m) {
  check_parameter(m, max_elliptic_parameter, "jacobi_sncndn");
  if (m == 0.0) return {std::sin(x), std::cos(x), 1.0};

  // Reduce to one period first so that the Landen phase stays small.
  const double period = 4.0 * complete_K(m);
  x -= period * std::round(x / period);

  std::array<double, max_agm_steps> a{};
  std::array<double, max_agm_steps> c{};
  a[0] = 1.0;
  double b = std::sqrt(1.0 - m);
  c[0] = std::sqrt(m);
  int n = 0;
  while (std::abs(c[n]) > 1e-16 && n + 1 < max_agm_steps) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = c[n] * c[n] / (4.0 * a[n + 1]);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * x, n);
  for (int i = n; i > 0; --i) phi = 0.5 * (phi + std::asin(c[i] * std::sin(phi) / a[i]));
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  return {sn, cn, std::sqrt(1.0 - m * sn * sn)};
}

double jacobi_cd(double x, double m) {
  const auto t = jacobi_sncndn(x, m);
  return t.cn / t.dn;
}

}  // namespace sgmeta
