// Freidlin–Wentzell action of discretized paths and the communication
// height between wells via a climbing-image string method.
#pragma once

#include "sgmeta/field.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace sgmeta {

struct PathDiscretization {
  std::vector<FourierField> images;
  std::optional<std::vector<double>> times;

  /// Same truncation throughout, at least 3 images, increasing times.
  void validate() const;
};

/// I = ½ ∫∫ (∂t u + ∇F(u))² dx dt, with ∂t u and ∇F taken at interval
/// midpoints and the spatial integral by Parseval. Requires times.
double action(const PathDiscretization& path, const ModelParams& p);

struct StringOptions {
  /// K: the string has K+1 images including the fixed endpoints.
  int images = 64;
  int max_iterations = 10000;
  /// Stop once the highest image moves less than this in one iteration.
  double tolerance = 1e-8;
  /// Initial relaxation step; halved whenever the maximum energy rises.
  double step = 0.5;
  double min_step = 1e-6;
  /// Amplitude of a cos(x) bump added to interior images so the string can
  /// leave the invariant subspace of constant fields.
  double symmetry_breaking = 0.1;
  /// The highest image starts climbing once it moves less than this.
  double climb_after = 1e-3;
  /// Per-iteration diagnostics as CSV (iteration,step,max_energy,argmax,movement).
  std::ostream* diagnostics = nullptr;
};

struct StringResult {
  /// max_i F(φ_i) − F(a).
  double height = 0.0;
  FourierField argmax_image;
  int argmax_index = 0;
  int iterations = 0;
  /// Iteration at which the highest image started climbing; the maximum
  /// energy is non-increasing before it.
  int climb_start = 0;
  /// ‖∇F‖ at the highest image.
  double argmax_residual = 0.0;
  std::vector<double> max_energy_history;
  std::vector<FourierField> images;
};

/// Minimum energy path from a to b. Throws ConvergenceError when
/// max_iterations is reached first.
StringResult communication_height(const FourierField& a, const FourierField& b, const ModelParams& p,
                                  const StringOptions& opt = {});

/// min_t ‖translate(u, t) − v‖_{L²}.
double distance_modulo_translation(const FourierField& u, const FourierField& v);

}  // namespace sgmeta
