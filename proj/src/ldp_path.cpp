#include "sgmeta/ldp_path.hpp"

#include "sgmeta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sgmeta {

namespace {
constexpr double pi = std::numbers::pi;

std::vector<double> arc_lengths(const std::vector<FourierField>& images, std::size_t first, std::size_t last) {
  std::vector<double> s{0.0};
  for (std::size_t i = first + 1; i <= last; ++i) s.push_back(s.back() + l2_norm(images[i] - images[i - 1]));
  return s;
}

// Redistributes images first..last (endpoints kept) to equal L² spacing.
void reparametrize(std::vector<FourierField>& images, std::size_t first, std::size_t last) {
  if (last <= first + 1) return;
  const auto s = arc_lengths(images, first, last);
  const double total = s.back();
  if (total == 0.0) return;
  std::vector<FourierField> old(images.begin() + first, images.begin() + last + 1);
  const std::size_t count = last - first;
  std::size_t seg = 0;
  for (std::size_t j = 1; j < count; ++j) {
    const double target = total * double(j) / double(count);
    while (seg + 1 < count && s[seg + 1] < target) ++seg;
    const double len = s[seg + 1] - s[seg];
    const double w = len > 0.0 ? (target - s[seg]) / len : 0.0;
    images[first + j] = (1.0 - w) * old[seg] + w * old[seg + 1];
  }
}

// Semi-implicit relaxation φ⁺ = (φ − h(R(φ) − f))/(1 + h n²) with an extra
// explicit force f.
FourierField relax(const FourierField& phi, const ModelParams& p, double h, const FourierField* force) {
  FourierField out = phi - h * reaction_gradient(phi, p);
  if (force) out += h * *force;
  for (int n = 1; n <= phi.truncation(); ++n) {
    const double d = 1.0 / (1.0 + h * n * n);
    out.at(n) *= d;
    out.at(-n) *= d;
  }
  return out;
}
}  // namespace

void PathDiscretization::validate() const {
  if (images.size() < 3) throw std::invalid_argument("a path needs at least 3 images");
  const int N = images.front().truncation();
  for (const auto& u : images)
    if (u.truncation() != N) throw std::invalid_argument("images have different truncations");
  if (times) {
    if (times->size() != images.size()) throw std::invalid_argument("times and images differ in length");
    for (std::size_t k = 1; k < times->size(); ++k)
      if (!((*times)[k] > (*times)[k - 1])) throw std::invalid_argument("times must be strictly increasing");
  }
}

double action(const PathDiscretization& path, const ModelParams& p) {
  path.validate();
  if (!path.times) throw std::invalid_argument("action needs image times");
  const auto& t = *path.times;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.images.size(); ++k) {
    const double h = t[k + 1] - t[k];
    const FourierField mid = 0.5 * (path.images[k] + path.images[k + 1]);
    const FourierField residual = (1.0 / h) * (path.images[k + 1] - path.images[k]) + gradient(mid, p);
    const double r = l2_norm(residual);
    total += 0.5 * h * r * r;
  }
  return total;
}

StringResult communication_height(const FourierField& a, const FourierField& b, const ModelParams& p,
                                  const StringOptions& opt) {
  p.validate();
  if (a.truncation() != b.truncation()) throw std::invalid_argument("endpoints have different truncations");
  if (opt.images < 2) throw std::invalid_argument("the string needs at least 2 intervals");
  const int K = opt.images;
  const int N = a.truncation();
  const double Fa = potential(a, p);

  StringResult result;
  if (l2_norm(a - b) == 0.0) {
    result.argmax_image = a;
    result.argmax_residual = l2_norm(gradient(a, p));
    result.images.assign(static_cast<std::size_t>(K + 1), a);
    return result;
  }

  std::vector<FourierField> images;
  for (int i = 0; i <= K; ++i) {
    FourierField u = (1.0 - double(i) / K) * a + (double(i) / K) * b;
    if (N >= 1) u.at(1) += opt.symmetry_breaking * std::sqrt(pi) * std::sin(pi * i / K);
    images.push_back(std::move(u));
  }
  reparametrize(images, 0, static_cast<std::size_t>(K));

  auto energies = [&](const std::vector<FourierField>& imgs) {
    std::vector<double> e(imgs.size());
    for (std::size_t i = 0; i < imgs.size(); ++i) e[i] = potential(imgs[i], p);
    return e;
  };
  auto argmax = [](const std::vector<double>& e) {
    return static_cast<int>(std::max_element(e.begin() + 1, e.end() - 1) - e.begin());
  };

  if (opt.diagnostics) *opt.diagnostics << "iteration,step,max_energy,argmax,movement\n";
  std::vector<double> E = energies(images);
  int top = argmax(E);
  double h = opt.step;
  int climber = -1;
  bool converged = false;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const double max_before = E[static_cast<std::size_t>(top)];
    std::vector<FourierField> trial;
    std::vector<double> Et;
    int top_t = top;
    for (;;) {
      trial = images;
      for (int i = 1; i < K; ++i) {
        if (i == climber) {
          // Reflect the force along the tangent so the image climbs to the saddle.
          FourierField tangent = images[i + 1] - images[i - 1];
          tangent *= 1.0 / l2_norm(tangent);
          const FourierField g = gradient(images[i], p);
          FourierField force = 2.0 * inner(g, tangent) * tangent;
          trial[i] = relax(images[i], p, h, &force);
        } else {
          trial[i] = relax(images[i], p, h, nullptr);
        }
      }
      if (climber > 0) {
        reparametrize(trial, 0, static_cast<std::size_t>(climber));
        reparametrize(trial, static_cast<std::size_t>(climber), static_cast<std::size_t>(K));
      } else {
        reparametrize(trial, 0, static_cast<std::size_t>(K));
      }
      Et = energies(trial);
      top_t = climber > 0 ? climber : argmax(Et);
      // A climbing image rises by design; only the pure relaxation phase is
      // required to lower the maximum.
      if (climber > 0 || Et[static_cast<std::size_t>(top_t)] <= max_before + 1e-14 || h <= opt.min_step) break;
      h = std::max(0.5 * h, opt.min_step);
    }
    const double movement = l2_norm(trial[static_cast<std::size_t>(top_t)] - images[static_cast<std::size_t>(top)]);
    images = std::move(trial);
    E = std::move(Et);
    top = top_t;
    result.max_energy_history.push_back(E[static_cast<std::size_t>(top)]);
    if (opt.diagnostics)
      *opt.diagnostics << it << ',' << h << ',' << E[static_cast<std::size_t>(top)] << ',' << top << ',' << movement
                       << '\n';
    if (climber < 0 && movement < opt.climb_after) {
      climber = top;
      result.climb_start = it + 1;
      continue;
    }
    if (climber > 0 && movement < opt.tolerance) {
      converged = true;
      ++it;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("string method reached " + std::to_string(opt.max_iterations) + " iterations",
                           result.max_energy_history);

  result.iterations = it;
  result.argmax_index = top;
  result.argmax_image = images[static_cast<std::size_t>(top)];
  result.height = E[static_cast<std::size_t>(top)] - Fa;
  result.argmax_residual = l2_norm(gradient(result.argmax_image, p));
  result.images = std::move(images);
  return result;
}

double distance_modulo_translation(const FourierField& u, const FourierField& v) {
  if (u.truncation() != v.truncation()) throw std::invalid_argument("fields have different truncations");
  // Maximize the correlation C(t) = ⟨translate(u, t), v⟩, a trigonometric
  // polynomial: coarse scan, then Newton on C'(t) = 0.
  const int N = u.truncation();
  auto derivs = [&](double t) {
    double d1 = 0.0, d2 = 0.0;
    for (int n = 1; n <= N; ++n) {
      const double c = std::cos(n * t), s = std::sin(n * t);
      const double a = u.at(n), b = u.at(-n), x = v.at(n), y = v.at(-n);
      d1 += n * ((-s * a - c * b) * x + (c * a - s * b) * y);
      d2 += double(n) * n * ((-c * a + s * b) * x + (-s * a - c * b) * y);
    }
    return std::pair{d1, d2};
  };
  const int scan = std::max(64, 16 * N);
  double t = 0.0;
  double best = -1e300;
  double t_scan = 0.0;
  for (int k = 0; k < scan; ++k) {
    const double tk = 2 * pi * k / scan;
    const double c = inner(translate(u, tk), v);
    if (c > best) {
      best = c;
      t = tk;
    }
  }
  t_scan = t;
  for (int it = 0; it < 50; ++it) {
    const auto [d1, d2] = derivs(t);
    if (!(d2 < 0.0)) break;
    const double dt = -d1 / d2;
    t += dt;
    if (std::abs(dt) < 1e-15) break;
  }
  return std::min(l2_norm(translate(u, t) - v), l2_norm(translate(u, t_scan) - v));
}

}  // namespace sgmeta
