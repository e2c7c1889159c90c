#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sllbar/ldp.hpp"

using namespace sllbar;

namespace {

constexpr double kPi = std::numbers::pi;

VectorField smooth_field(const BasisPtr& b, std::size_t top, std::uint64_t seed, double scale = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  VectorField u(b);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < std::min(top, b->modes()); ++k) {
      u(c, k) = scale * normal(rng) / ((1.0 + k) * (1.0 + k));
    }
  }
  return u;
}

SolverConfig config(double dt, double horizon) {
  SolverConfig c;
  c.dt = dt;
  c.horizon = horizon;
  return c;
}

struct Setup {
  BasisPtr basis = build_basis(kPi, 8, 16);
  NoiseCoefficients nc{smooth_field(basis, 3, 1, 1.0), smooth_field(basis, 3, 2, 0.3)};
  LevyMeasure nu{{{0.5, 1.0}}};
  VectorField u0 = smooth_field(basis, 4, 3);
};

}  // namespace

TEST_CASE("entropy integrand") {
  CHECK(entropy_integrand(1.0) == 0.0);
  CHECK(entropy_integrand(0.0) == 1.0);
  CHECK(entropy_integrand(2.0) == doctest::Approx(2 * std::log(2.0) - 1).epsilon(1e-15));
  CHECK_THROWS_AS(entropy_integrand(-0.1), std::invalid_argument);
  for (double x = 0.05; x < 5.0; x += 0.05) {
    CHECK(entropy_integrand(x) >= 0.0);
    CHECK(entropy_integrand(x) == doctest::Approx(x * std::log(x) - x + 1).epsilon(1e-14));
    // Midpoint convexity.
    const double y = x + 0.37;
    CHECK(entropy_integrand(0.5 * (x + y)) <= 0.5 * (entropy_integrand(x) + entropy_integrand(y)) + 1e-15);
  }
}

TEST_CASE("rate cost examples") {
  const LevyMeasure unit({{0.5, 1.0}});
  CHECK(rate_cost(Control::constant(1.0, 1, 1.0), unit) == 0.0);
  CHECK(std::abs(rate_cost(Control::constant(1.0, 1, 2.0), unit) - (2 * std::log(2.0) - 1)) < 1e-12);
  CHECK(rate_cost(Control::constant(1.0, 1, 0.0), unit) == 1.0);
  CHECK_THROWS_AS(rate_cost(Control::constant(1.0, 2, 1.0), unit), std::invalid_argument);
}

TEST_CASE("rate cost is additive over pieces and atoms") {
  const LevyMeasure nu({{0.5, 1.5}, {-0.3, 0.25}});
  const Control theta({0.0, 0.3, 1.0}, 2, {2.0, 0.5, 3.0, 1.0});
  const double expected = 1.5 * (0.3 * entropy_integrand(2.0) + 0.7 * entropy_integrand(3.0)) +
                          0.25 * (0.3 * entropy_integrand(0.5) + 0.7 * entropy_integrand(1.0));
  CHECK(rate_cost(theta, nu) == doctest::Approx(expected).epsilon(1e-15));
  const LevyMeasure first({{0.5, 1.5}});
  const LevyMeasure second({{-0.3, 0.25}});
  const Control a({0.0, 0.3, 1.0}, 1, {2.0, 3.0});
  const Control b({0.0, 0.3, 1.0}, 1, {0.5, 1.0});
  CHECK(rate_cost(theta, nu) == doctest::Approx(rate_cost(a, first) + rate_cost(b, second)).epsilon(1e-15));
}

TEST_CASE("z distance is a metric on trajectories") {
  Setup s;
  const SolverConfig c = config(1e-3, 0.05);
  std::vector<Trajectory> runs;
  for (std::uint64_t seed : {4, 5, 6}) runs.push_back(integrate_deterministic(smooth_field(s.basis, 4, seed), c));
  for (const auto& r : runs) CHECK(z_distance(r, r).metric() == 0.0);
  const double ab = z_distance(runs[0], runs[1]).metric();
  CHECK(ab > 0.0);
  CHECK(std::abs(ab - z_distance(runs[1], runs[0]).metric()) < 1e-12);
  CHECK(z_distance(runs[0], runs[2]).metric() <=
        ab + z_distance(runs[1], runs[2]).metric() + 1e-12);
  CHECK(z_norm(runs[0]).sup_h1 == doctest::Approx(z_distance(runs[0], integrate_deterministic(VectorField(s.basis), c)).sup_h1));

  SolverConfig other = c;
  other.dt = 5e-4;
  CHECK_THROWS_AS(z_distance(runs[0], integrate_deterministic(s.u0, other)), std::invalid_argument);
  SolverConfig dropped = c;
  dropped.keep_fields = false;
  CHECK_THROWS_AS(z_distance(runs[0], integrate_deterministic(s.u0, dropped)), std::invalid_argument);
}

TEST_CASE("strictly decreasing") {
  CHECK(strictly_decreasing({3.0, 2.0, 1.0}));
  CHECK_FALSE(strictly_decreasing({3.0, 3.0, 1.0}));
  CHECK_FALSE(strictly_decreasing({1.0, 2.0}));
  CHECK(strictly_decreasing({1.0}));
}

TEST_CASE("condition 1 with a constant sequence gives exact zeros") {
  Setup s;
  const Control theta = Control::constant(0.1, 1, 1.5);
  const ConvergenceReport r =
      check_condition1({theta, theta, theta}, theta, s.u0, s.nc, s.nu, config(1e-3, 0.1));
  for (const auto& row : r.cases) CHECK(row.metric == 0.0);
  CHECK(r.passed);
}

TEST_CASE("condition 1: sin^2 sequence converges") {
  Setup s;
  const double T = 0.2;
  auto make = [&](double a) {
    return Control::from_function(T, 1, 20, [&](double t, std::size_t) {
      const double sn = std::sin(kPi * t / T);
      return 1.0 + a * sn * sn;
    });
  };
  std::vector<Control> seq;
  std::vector<double> labels;
  for (double n : {2.0, 4.0, 8.0, 16.0}) {
    seq.push_back(make(1.0 - 1.0 / n));
    labels.push_back(n);
  }
  const ConvergenceReport r = check_condition1(seq, make(1.0), s.u0, s.nc, s.nu, config(1e-3, T), {}, labels);
  REQUIRE(r.cases.size() == 4);
  CHECK(r.monotone);
  CHECK(r.passed);
  CHECK(r.cases[3].parameter == 16.0);
  // Distances scale like 1/n.
  CHECK(r.cases[0].metric / r.cases[1].metric == doctest::Approx(2.0).epsilon(0.1));
  for (const auto& row : r.cases) CHECK(row.cost > 0.0);
}

TEST_CASE("condition 1 rejects controls above the cost bound") {
  Setup s;
  Condition1Options opt;
  opt.cost_bound = 0.01;
  const Control theta = Control::constant(0.1, 1, 3.0);
  CHECK_THROWS_AS(check_condition1({theta}, theta, s.u0, s.nc, s.nu, config(1e-3, 0.1), opt),
                  std::invalid_argument);
}

TEST_CASE("condition 2 without noise gives zeros") {
  Setup s;
  const LevyMeasure empty;
  Condition2Options opt;
  opt.ensemble = 4;
  const ConvergenceReport r = check_condition2(Control::constant(0.1, 0, 1.0), {0.4, 0.2, 0.1}, s.u0,
                                               s.nc, empty, config(1e-3, 0.1), opt);
  for (const auto& row : r.cases) {
    CHECK(row.metric == 0.0);
    CHECK(row.excluded_fraction == 0.0);
  }
  CHECK(r.passed);
}

TEST_CASE("condition 2 input validation") {
  Setup s;
  const Control phi = Control::constant(0.1, 1, 1.0);
  const SolverConfig c = config(1e-3, 0.1);
  CHECK_THROWS_AS(check_condition2(phi, {}, s.u0, s.nc, s.nu, c), std::invalid_argument);
  CHECK_THROWS_AS(check_condition2(phi, {0.1, 0.2}, s.u0, s.nc, s.nu, c), std::invalid_argument);
  CHECK_THROWS_AS(check_condition2(phi, {1.5}, s.u0, s.nc, s.nu, c), std::invalid_argument);
  CHECK_THROWS_AS(check_condition2(Control::constant(0.1, 1, 1e-3), {0.5}, s.u0, s.nc, s.nu, c),
                  std::invalid_argument);
}

TEST_CASE("condition 2 estimates are stable when the ensemble doubles") {
  Setup s;
  const Control phi = Control::constant(0.1, 1, 1.0);
  const SolverConfig c = config(2e-3, 0.1);
  Condition2Options small;
  small.ensemble = 32;
  small.threads = 1;
  Condition2Options large = small;
  large.ensemble = 64;
  const auto a = check_condition2(phi, {0.5, 0.25}, s.u0, s.nc, s.nu, c, small);
  const auto b = check_condition2(phi, {0.5, 0.25}, s.u0, s.nc, s.nu, c, large);
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    CHECK(a.cases[i].metric > 0.0);
    CHECK(std::abs(a.cases[i].metric - b.cases[i].metric) < 2 * a.cases[i].metric_se);
  }
  CHECK(b.cases[1].metric < b.cases[0].metric);
}
