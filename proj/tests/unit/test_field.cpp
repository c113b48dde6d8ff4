#include "sgmeta/field.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace sgmeta;
using sgmeta::testing::random_field;
using sgmeta::testing::rel_diff;

namespace {
constexpr double pi = std::numbers::pi;

// Direct evaluation of the basis expansion at a point, independent of FFTW.
double evaluate_at(const FourierField& u, double x) {
  double v = u.at(0);
  for (int n = 1; n <= u.truncation(); ++n)
    v += (u.at(n) * std::cos(n * x) + u.at(-n) * std::sin(n * x)) / std::sqrt(pi);
  return v;
}

ModelParams params(double gamma, double beta, int N = 16) {
  ModelParams p;
  p.gamma = gamma;
  p.beta = beta;
  p.N = N;
  return p;
}
}  // namespace

TEST_CASE("FourierField rejects coefficient arrays of the wrong length") {
  CHECK_THROWS_AS(FourierField(3, std::vector<double>(6)), std::invalid_argument);
  CHECK(FourierField(3, std::vector<double>(7)).size() == 7);
}

TEST_CASE("Parseval identity with the unnormalized zero mode") {
  std::mt19937_64 rng(11);
  const auto u = random_field(12, rng);
  const int M = 512;
  const auto values = evaluate_on_grid(u, M);
  double quad = 0.0;
  for (double v : values) quad += v * v;
  quad *= 2.0 * pi / M;
  double parseval = 2.0 * pi * u.at(0) * u.at(0);
  for (int n = 1; n <= 12; ++n) parseval += u.at(n) * u.at(n) + u.at(-n) * u.at(-n);
  CHECK(quad == doctest::Approx(parseval).epsilon(1e-13));
  CHECK(l2_norm(u) * l2_norm(u) == doctest::Approx(parseval).epsilon(1e-14));
}

TEST_CASE("evaluate_on_grid") {
  SUBCASE("constant field") {
    const auto values = evaluate_on_grid(FourierField::constant(5, 2.5), 16);
    for (double v : values) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));
  }
  SUBCASE("single cosine mode") {
    const int M = 32;
    const auto values = evaluate_on_grid(FourierField::mode(5, 3), M);
    for (int j = 0; j < M; ++j)
      CHECK(values[j] == doctest::Approx(std::cos(3 * 2 * pi * j / M) / std::sqrt(pi)).epsilon(1e-14));
  }
  SUBCASE("matches direct summation") {
    std::mt19937_64 rng(3);
    const auto u = random_field(9, rng);
    const auto values = evaluate_on_grid(u, 64);
    for (int j = 0; j < 64; ++j) CHECK(values[j] == doctest::Approx(evaluate_at(u, 2 * pi * j / 64)).epsilon(1e-13));
  }
  SUBCASE("undersampled grid is rejected") {
    CHECK_THROWS_WITH_AS(evaluate_on_grid(FourierField(8), 16), "undersampled", std::invalid_argument);
    CHECK_NOTHROW(evaluate_on_grid(FourierField(8), 17));
  }
}

TEST_CASE("grid round trip reproduces coefficients") {
  std::mt19937_64 rng(5);
  for (int N : {1, 7, 16, 64}) {
    const auto u = random_field(N, rng);
    for (int M : {8 * N, 4 * (2 * N + 1), 2 * N + 1}) {
      const auto back = grid_to_fourier(evaluate_on_grid(u, M), N);
      const double err = l2_norm(back - u) / l2_norm(u);
      CHECK(err < 1e-12);
    }
  }
}

TEST_CASE("potential at constant fields") {
  const auto p = params(0.7, 1.9);
  CHECK(potential(FourierField(16), p) == doctest::Approx(-2 * pi * p.gamma / p.beta).epsilon(1e-14));
  CHECK(potential(FourierField::constant(16, pi / p.beta), p) ==
        doctest::Approx(2 * pi * p.gamma / p.beta).epsilon(1e-14));
  const double beyond = (p.confining_k + 1) * 2 * pi / p.beta;
  const double expected = -2 * pi * p.gamma / p.beta + std::pow(2 * pi / p.beta, 2);
  CHECK(potential(FourierField::constant(16, beyond), p) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("kinetic part of the potential equals ½ Σ n² û(n)²") {
  std::mt19937_64 rng(17);
  const auto u = random_field(10, rng);
  // With γ → 0 only the gradient and (inactive) confining terms remain.
  auto p = params(1e-300, 1.0);
  double expected = 0.0;
  for (int n = 1; n <= 10; ++n) expected += 0.5 * n * n * (u.at(n) * u.at(n) + u.at(-n) * u.at(-n));
  CHECK(potential(u, p) == doctest::Approx(expected).epsilon(1e-14));
  // Independent route: quadrature of (∂ₓu)² on a fine grid.
  const auto du = evaluate_on_grid(derivative(u), 256);
  double quad = 0.0;
  for (double v : du) quad += v * v;
  CHECK(0.5 * quad * 2 * pi / 256 == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("gradient vanishes at the constant critical points") {
  const auto p = params(1.3, 0.8);
  CHECK(l2_norm(gradient(FourierField(16), p)) < 1e-15);
  CHECK(l2_norm(gradient(FourierField::constant(16, pi / p.beta), p)) < 1e-14);
}

TEST_CASE("gradient matches central finite differences of the potential") {
  std::mt19937_64 rng(23);
  const auto p = params(0.9, 2.1, 12);
  const double h = 1e-5;
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = random_field(12, rng);
    const auto v = random_field(12, rng);
    const double fd = (potential(u + h * v, p) - potential(u - h * v, p)) / (2 * h);
    CHECK(rel_diff(inner(gradient(u, p), v), fd) < 1e-6);
  }
}

TEST_CASE("gradient is the exact derivative: Richardson-extrapolated differences") {
  std::mt19937_64 rng(29);
  auto p = params(0.6, 3.0, 8);
  p.confining_k = 1;
  for (int trial = 0; trial < 20; ++trial) {
    auto u = random_field(8, rng);
    // Exercise the confining branch on every other sample.
    if (trial % 2) u.at(0) += (trial % 4 == 1 ? 1.0 : -1.0) * 2.5 * 2 * pi / p.beta;
    const auto v = random_field(8, rng);
    auto d = [&](double h) { return (potential(u + h * v, p) - potential(u - h * v, p)) / (2 * h); };
    const double richardson = (4.0 * d(1e-4) - d(2e-4)) / 3.0;
    // Scale by ‖∇F‖‖v‖: the directional derivative itself can nearly cancel.
    const auto g = gradient(u, p);
    CHECK(std::abs(inner(g, v) - richardson) < 1e-8 * l2_norm(g) * l2_norm(v));
  }
}

TEST_CASE("Hessian at constant fields is diagonal with n² + γβ cos(βc)") {
  auto p = params(0.5, 1.0, 6);
  SUBCASE("saddle π/β") {
    const auto H = hessian_matrix(FourierField::constant(6, pi / p.beta), p);
    for (int a = -6; a <= 6; ++a)
      for (int b = -6; b <= 6; ++b) {
        const double expected = a == b ? a * a - 0.5 : 0.0;
        CHECK(std::abs(H(a + 6, b + 6) - expected) < 1e-12);
      }
  }
  SUBCASE("minimum 0") {
    const auto H = hessian_matrix(FourierField(6), p);
    for (int a = -6; a <= 6; ++a) CHECK(H(a + 6, a + 6) == doctest::Approx(a * a + 0.5).epsilon(1e-14));
    CHECK((H - Eigen::MatrixXd(H.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Hessian is symmetric and matches finite differences of the gradient") {
  std::mt19937_64 rng(31);
  const int N = 10;
  auto p = params(1.1, 1.7, N);
  for (int trial = 0; trial < 4; ++trial) {
    auto u = random_field(N, rng);
    if (trial == 3) u.at(0) = 1.5 * 2 * pi / p.beta;  // confining term active
    const auto H = hessian_matrix(u, p);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    const auto v = random_field(N, rng);
    const double h = 1e-5;
    const auto dg = (gradient(u + h * v, p) - gradient(u - h * v, p)) * (1.0 / (2 * h));
    // In orthonormal coordinates the Jacobian of the gradient is S J S⁻¹ = H.
    const Eigen::VectorXd lhs = H * to_orthonormal(v);
    const Eigen::VectorXd rhs = to_orthonormal(dg);
    CHECK((lhs - rhs).norm() / rhs.norm() < 1e-6);
  }
}

TEST_CASE("besov_norm") {
  CHECK(besov_norm(FourierField::constant(8, -1.25), 0.45) == doctest::Approx(1.25));
  CHECK(besov_norm(FourierField::mode(8, 4), 0.45) ==
        doctest::Approx(std::pow(2.0, 2 * 0.45) / std::sqrt(pi)).epsilon(1e-12));
  // A sine mode at the top of a block: n = 7 lies in block j = 2.
  CHECK(besov_norm(FourierField::mode(8, -7, 0.5), 0.3) ==
        doctest::Approx(0.5 * std::pow(2.0, 2 * 0.3) / std::sqrt(pi)).epsilon(1e-6));
  std::mt19937_64 rng(37);
  const auto u = random_field(20, rng);
  for (double lambda : {0.1, 2.0, 7.5})
    CHECK(besov_norm(lambda * u, 0.4) == doctest::Approx(lambda * besov_norm(u, 0.4)).epsilon(1e-13));
}

TEST_CASE("translate") {
  std::mt19937_64 rng(41);
  const auto u = random_field(15, rng);
  CHECK(translate(u, 0.0) == u);
  CHECK(l2_norm(translate(u, 2 * pi) - u) < 1e-12);
  std::uniform_real_distribution<double> shift(0.0, 2 * pi);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = shift(rng);
    const auto ut = translate(u, t);
    CHECK(l2_norm(ut) == doctest::Approx(l2_norm(u)).epsilon(1e-12));
    // Pointwise definition: (T_t u)(x) = u(x − t).
    for (double x : {0.0, 0.7, 3.1, 5.9}) CHECK(evaluate_at(ut, x) == doctest::Approx(evaluate_at(u, x - t)).epsilon(1e-12));
    // Commutes with Fourier truncation.
    CHECK(l2_norm(resized(ut, 7) - translate(resized(u, 7), t)) < 1e-14);
  }
}

TEST_CASE("potential is translation invariant") {
  std::mt19937_64 rng(43);
  auto p = params(0.8, 2.0, 14);
  auto u = random_field(14, rng);
  u.at(0) = 3.5 * pi / p.beta;  // keep the confining term in play
  const double F = potential(u, p);
  for (double t : {0.3, 1.7, 4.4}) CHECK(potential(translate(u, t), p) == doctest::Approx(F).epsilon(1e-13));
}

TEST_CASE("split_mean_osc") {
  const auto c = split_mean_osc(FourierField::constant(4, 0.75));
  CHECK(c.mean == 0.75);
  CHECK(l2_norm(c.osc) == 0.0);
  const auto m = split_mean_osc(FourierField::mode(4, 1));
  CHECK(m.mean == 0.0);
  CHECK(m.osc == FourierField::mode(4, 1));
  std::mt19937_64 rng(47);
  const auto u = random_field(9, rng);
  const auto s = split_mean_osc(u);
  CHECK(FourierField::constant(9, s.mean) + s.osc == u);
}

TEST_CASE("ModelParams validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.gamma = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.gamma = 1.0;
  p.beta = 1.0;
  CHECK_THROWS_AS(p.require_regime(), std::invalid_argument);
  p.beta = 2.0;
  CHECK_NOTHROW(p.require_regime());
}
