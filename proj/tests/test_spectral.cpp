#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sllbar/field.hpp"
#include "sllbar/spectral.hpp"

using namespace sllbar;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("eigenvalues on [0, pi] are k^2") {
  const auto b = build_basis(kPi, 4, 8);
  const double expected[] = {0, 1, 4, 9};
  for (std::size_t k = 0; k < 4; ++k) CHECK(b->eigenvalue(k) == doctest::Approx(expected[k]).epsilon(1e-14));
}

TEST_CASE("eigenvalues on [0, 2 pi]") {
  const auto b = build_basis(2 * kPi, 2, 4);
  CHECK(b->eigenvalue(0) == 0.0);
  CHECK(b->eigenvalue(1) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("grid below the dealiasing bound is rejected") {
  CHECK_THROWS_AS(build_basis(kPi, 4, 7), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(0.0, 4, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(kPi, 0, 8), std::invalid_argument);
}

TEST_CASE("midpoint grid") {
  const auto b = build_basis(2.0, 3, 8);
  for (std::size_t m = 0; m < 8; ++m) CHECK(b->grid()[m] == doctest::Approx((m + 0.5) * 0.25));
}

TEST_CASE("discrete Gram matrix is the identity") {
  const auto b = build_basis(1.7, 12, 24);
  const std::size_t n = b->modes();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> ei(n, 0.0);
    ei[i] = 1.0;
    const auto gi = b->inverse(ei);
    const auto back = b->forward(gi);
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(back[j] - (i == j ? 1.0 : 0.0)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("forward of sampled eigenfunctions") {
  const auto b = build_basis(kPi, 4, 8);
  std::vector<double> f(8), zero(8, 0.0), mix(8);
  for (std::size_t m = 0; m < 8; ++m) {
    const double x = b->grid()[m];
    f[m] = b->eigenfunction(1, x);
    mix[m] = 3.0 * b->eigenfunction(0, x) + 0.5 * b->eigenfunction(2, x);
  }
  const auto c = b->forward(f);
  const auto z = b->forward(zero);
  const auto cm = b->forward(mix);
  const double e1[] = {0, 1, 0, 0}, e2[] = {3, 0, 0.5, 0};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(c[k] - e1[k]) < 1e-13);
    CHECK(z[k] == 0.0);
    CHECK(std::abs(cm[k] - e2[k]) < 1e-13);
  }
  CHECK_THROWS_AS(b->forward(std::vector<double>(7)), std::invalid_argument);
}

TEST_CASE("inverse synthesis") {
  const auto b = build_basis(kPi, 4, 8);
  const auto g0 = b->inverse(std::vector<double>{1, 0, 0, 0});
  const auto g1 = b->inverse(std::vector<double>{0, 1, 0, 0});
  for (std::size_t m = 0; m < 8; ++m) {
    CHECK(g0[m] == doctest::Approx(std::sqrt(1 / kPi)).epsilon(1e-14));
    CHECK(g1[m] == doctest::Approx(std::sqrt(2 / kPi) * std::cos(b->grid()[m])).epsilon(1e-13));
  }
  CHECK_THROWS_AS(b->inverse(std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("round trip of random coefficients") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (std::size_t n : {1u, 5u, 16u, 33u}) {
    const auto b = build_basis(2.3, n, 2 * n + 3);
    std::vector<double> c(n);
    for (auto& v : c) v = normal(rng);
    const auto back = b->forward(b->inverse(c));
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(back[k] - c[k]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("projection") {
  const auto b = build_basis(kPi, 8, 16);
  std::vector<double> f(16);
  for (std::size_t m = 0; m < 16; ++m) f[m] = std::cos(b->grid()[m]) + std::cos(5 * b->grid()[m]);
  const auto c = b->forward(f);
  const auto p = project(c, 3);
  CHECK(std::abs(p[1] - std::sqrt(kPi / 2)) < 1e-13);
  for (std::size_t k = 0; k < 8; ++k) {
    if (k != 1) CHECK(std::abs(p[k]) < 1e-13);
  }
  const auto same = project(c, 8);
  for (std::size_t k = 0; k < 8; ++k) CHECK(same[k] == c[k]);
  const auto zero = project(std::vector<double>(8, 0.0), 4);
  for (double v : zero) CHECK(v == 0.0);
  CHECK_THROWS_AS(project(c, 9), std::invalid_argument);
}

TEST_CASE("sobolev norms of single modes") {
  const auto b = build_basis(kPi, 4, 8);
  CHECK(sobolev_norm_sq(VectorField::single_mode(b, 1, 0), 1) == doctest::Approx(2.0));
  CHECK(sobolev_norm_sq(VectorField::single_mode(b, 2, 1), 3) == doctest::Approx(125.0));
  for (int s = 0; s <= 3; ++s) CHECK(sobolev_norm_sq(VectorField(b), s) == 0.0);
  CHECK_THROWS_AS(sobolev_norm_sq(VectorField(b), 4), std::invalid_argument);
  CHECK_THROWS_AS(sobolev_norm_sq(VectorField(b), -1), std::invalid_argument);
}

TEST_CASE("Parseval against grid quadrature") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  const auto b = build_basis(3.0, 16, 32);
  for (int trial = 0; trial < 10; ++trial) {
    VectorField u(b);
    for (auto& v : u.coeffs()) v = normal(rng);
    const auto g = u.grid_values();
    double quad = 0.0;
    for (double v : g) quad += v * v * b->weight();
    CHECK(std::abs(sobolev_norm_sq(u, 0) - quad) < 1e-10 * quad);
  }
}

TEST_CASE("projection is idempotent and norm nonincreasing") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const auto b = build_basis(kPi, 12, 24);
  for (int trial = 0; trial < 20; ++trial) {
    VectorField u(b);
    for (auto& v : u.coeffs()) v = normal(rng);
    const std::size_t n = 1 + trial % 12;
    const VectorField p = project(u, n);
    CHECK(max_abs_diff(project(p, n), p) == 0.0);
    for (int s = 0; s <= 3; ++s) CHECK(sobolev_norm_sq(p, s) <= sobolev_norm_sq(u, s));
  }
}

TEST_CASE("Laplacian is diagonal on each mode") {
  const auto b = build_basis(kPi, 8, 16);
  for (std::size_t k = 0; k < 8; ++k) {
    const VectorField lap = laplacian(VectorField::single_mode(b, k, 0));
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(lap(0, j) == (j == k ? -b->eigenvalue(k) : 0.0));
    }
  }
}

TEST_CASE("analytic derivatives of eigenfunctions") {
  const auto b = build_basis(2.0, 5, 10);
  for (std::size_t k = 0; k < 5; ++k) {
    for (double x : {0.1, 0.77, 1.9}) {
      const double h = 1e-6;
      const double fd = (b->eigenfunction(k, x + h) - b->eigenfunction(k, x - h)) / (2 * h);
      CHECK(b->eigenfunction_derivative(k, x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}
