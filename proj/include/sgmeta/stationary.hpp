// Stationary solutions of the truncated sine-Gordon flow: constants, the
// elliptic-function families, Newton refinement and enumeration.
#pragma once

#include "sgmeta/errors.hpp"
#include "sgmeta/field.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sgmeta {

enum class StationaryKind { minimum, constant_saddle, elliptic_saddle };

std::string to_string(StationaryKind kind);

struct StationaryPoint {
  /// Representative; non-constant solutions have their peak at x = 0.
  FourierField field;
  std::optional<double> modulus;
  /// Spatial period is 2π/harmonic.
  std::optional<int> harmonic;
  double energy = 0.0;
  StationaryKind kind = StationaryKind::minimum;
  int neg_count = 0;
  int zero_count = 0;
  /// ‖∇F‖_{L²} after refinement.
  double residual = 0.0;
  /// Residual before each Newton iteration, ending with the final one.
  std::vector<double> residual_history;
};

/// Unique m in (0, 1) with 4K(m)/√(γβ) = 2π/j. Throws std::invalid_argument
/// ("no such orbit") when √(γβ) <= j.
double solve_modulus_for_period(double gamma_beta, int j);

/// The closed-form solution u(x) = (π + 2 arcsin(√m cd(√(γβ) x, m)))/β with
/// period 2π/j, projected onto wavenumbers |n| <= N from a fine grid.
FourierField elliptic_formula(const ModelParams& p, int j, int N);

struct NewtonOptions {
  enum class Pinning { automatic, none, harmonic };
  double tolerance = 1e-12;
  int max_iterations = 50;
  /// Accepted when the residual stagnates at roundoff level above `tolerance`.
  double stall_tolerance = 1e-10;
  /// automatic pins the translation mode when γβ > 1 and u0 is non-constant,
  /// using the harmonic of largest amplitude.
  Pinning pinning = Pinning::automatic;
  int pin_harmonic = 1;
};

/// Damped Newton on ∇F = 0. With pinning, the linear solves are bordered by
/// the translation direction ∂ₓu and the phase condition û(−j) = 0, û(j) > 0.
/// Throws ConvergenceError (with the residual history) on failure.
StationaryPoint newton_refine(const FourierField& u0, const ModelParams& p, const NewtonOptions& opt = {});

/// Refined j-th elliptic family member at truncation p.N.
StationaryPoint elliptic_saddle(const ModelParams& p, int j);

/// Constant saddle π/β and the elliptic families j = 1..⌊√(γβ)⌋ (j = √(γβ)
/// exactly is skipped), sorted by energy. Throws RegimeError at γβ = 1.
std::vector<StationaryPoint> enumerate_saddles(const ModelParams& p);

struct PhaseGrid {
  double beta = 1.0;
  /// Closed orbits inside the separatrix, excluding the center itself.
  int inner_levels = 8;
  /// Rotating orbits above the separatrix.
  int outer_levels = 4;
  /// H spacing of the outer levels, in units of γ/β.
  double outer_spacing = 0.5;
  int samples_per_branch = 201;
};

struct PhaseOrbit {
  int id = 0;
  /// "center", "periodic", "heteroclinic" or "rotating".
  std::string type;
  double level = 0.0;
  std::vector<double> u;
  std::vector<double> du;
};

/// Level sets of H(u, u') = u'²/2 + (γ/β) cos(βu) over u ∈ [0, 2π/β], with
/// γ = gamma_beta / grid.beta.
std::vector<PhaseOrbit> phase_portrait_data(double gamma_beta, const PhaseGrid& grid = {});

/// H(u, u') for the same γ, β.
double phase_energy(double gamma, double beta, double u, double du);

}  // namespace sgmeta
