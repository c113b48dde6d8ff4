// Real-basis <-> grid transforms backed by FFTW. Internal to the library.
#pragma once

#include <span>
#include <vector>

namespace sgmeta::detail {

/// Grid values at x_j = 2πj/M of the trigonometric polynomial with
/// sine-cosine coefficients `coeffs` (ordered n = -N..N). Requires M >= 2N+1.
void synthesize(std::span<const double> coeffs, int N, std::span<double> out);

/// Sine-cosine coefficients up to N of the trigonometric interpolant of
/// `values`. Requires values.size() >= 2N+1.
void analyze(std::span<const double> values, int N, std::span<double> coeffs);

}  // namespace sgmeta::detail
