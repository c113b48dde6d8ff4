#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sgmeta::detail {
namespace {

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

// The FFTW planner is not thread-safe; plan execution on fresh arrays is.
std::mutex planner_mutex;

const Plans& plans_for(int M) {
  static std::map<int, std::unique_ptr<Plans>> cache;
  std::lock_guard lock(planner_mutex);
  auto& slot = cache[M];
  if (!slot) {
    slot = std::make_unique<Plans>();
    std::vector<double> r(static_cast<std::size_t>(M));
    std::vector<std::complex<double>> c(static_cast<std::size_t>(M / 2 + 1));
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    slot->forward = fftw_plan_dft_r2c_1d(M, r.data(), cp, flags);
    slot->backward = fftw_plan_dft_c2r_1d(M, cp, r.data(), flags);
  }
  return *slot;
}

const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

}  // namespace

void synthesize(std::span<const double> coeffs, int N, std::span<double> out) {
  const int M = static_cast<int>(out.size());
  if (M < 2 * N + 1) throw std::invalid_argument("undersampled");
  const auto& plans = plans_for(M);
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(M / 2 + 1));
  spec[0] = coeffs[static_cast<std::size_t>(N)];
  for (int n = 1; n <= N; ++n) {
    const double a = coeffs[static_cast<std::size_t>(N + n)];
    const double b = coeffs[static_cast<std::size_t>(N - n)];
    spec[static_cast<std::size_t>(n)] = {0.5 * a * inv_sqrt_pi, -0.5 * b * inv_sqrt_pi};
  }
  fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
}

void analyze(std::span<const double> values, int N, std::span<double> coeffs) {
  const int M = static_cast<int>(values.size());
  if (M < 2 * N + 1) throw std::invalid_argument("undersampled");
  const auto& plans = plans_for(M);
  std::vector<double> in(values.begin(), values.end());
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(M / 2 + 1));
  fftw_execute_dft_r2c(plans.forward, in.data(), reinterpret_cast<fftw_complex*>(spec.data()));
  const double scale = 1.0 / M;
  const double two_sqrt_pi = 2.0 * std::sqrt(std::numbers::pi);
  coeffs[static_cast<std::size_t>(N)] = spec[0].real() * scale;
  for (int n = 1; n <= N; ++n) {
    const auto c = spec[static_cast<std::size_t>(n)] * scale;
    coeffs[static_cast<std::size_t>(N + n)] = two_sqrt_pi * c.real();
    coeffs[static_cast<std::size_t>(N - n)] = -two_sqrt_pi * c.imag();
  }
}

}  // namespace sgmeta::detail
