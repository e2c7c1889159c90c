#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sllbar/diagnostics.hpp"
#include "sllbar/integrator.hpp"
#include "sllbar/ldp.hpp"

using namespace sllbar;

namespace {

constexpr double kPi = std::numbers::pi;

VectorField smooth_field(const BasisPtr& b, std::size_t top, std::uint64_t seed,
                         double scale = 0.5) {
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

bool bitwise_equal(const Trajectory& a, const Trajectory& b) {
  if (a.times != b.times || a.h1_sq != b.h1_sq || a.h3_sq != b.h3_sq) return false;
  if (a.states.size() != b.states.size() || a.jumps.size() != b.jumps.size()) return false;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    const auto x = a.states[i].coeffs(), y = b.states[i].coeffs();
    if (!std::equal(x.begin(), x.end(), y.begin())) return false;
  }
  return a.status == b.status;
}

double sup_h1_distance(const Trajectory& a, const Trajectory& b) {
  return z_distance(a, b).sup_h1;
}

}  // namespace

TEST_CASE("linear mode rates") {
  const auto b = build_basis(kPi, 8, 16);
  for (auto [k, expected] : {std::pair<std::size_t, double>{2, std::exp(-1.0)},
                             std::pair<std::size_t, double>{1, std::exp(0.2)}}) {
    const VectorField u0 = VectorField::single_mode(b, k, 0, 1e-6);
    const Trajectory t = integrate_deterministic(u0, config(1e-4, 0.1));
    const double ratio = t.states.back()(0, k) / 1e-6;
    CHECK(std::abs(ratio / expected - 1.0) < 1e-6);
    CHECK(t.times.back() == doctest::Approx(0.1).epsilon(1e-14));
  }
}

TEST_CASE("zero is a fixed point of one step") {
  const auto b = build_basis(kPi, 8, 16);
  const VectorField zero(b);
  CHECK(sobolev_norm_sq(step_drift(zero, 1e-3), 0) == 0.0);
  CHECK(sobolev_norm_sq(step_drift(zero, 1e-3, {}, Scheme::imex_euler), 0) == 0.0);
}

TEST_CASE("imex Euler agrees with ETD-RK2 to first order") {
  const auto b = build_basis(kPi, 12, 24);
  const VectorField u0 = smooth_field(b, 4, 1);
  SolverConfig etd = config(1e-4, 0.05);
  SolverConfig imex = etd;
  imex.scheme = Scheme::imex_euler;
  const double d1 = sup_h1_distance(integrate_deterministic(u0, etd), integrate_deterministic(u0, imex));
  imex.dt = etd.dt = 5e-5;
  imex.record_every = etd.record_every = 2;
  const double d2 = sup_h1_distance(integrate_deterministic(u0, etd), integrate_deterministic(u0, imex));
  CHECK(d1 < 1e-2);
  CHECK(d2 / d1 == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.horizon = 1e-4;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.blowup_cap = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.record_every = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("record stride gives a fixed snapshot grid") {
  const auto b = build_basis(kPi, 6, 12);
  SolverConfig c = config(1e-3, 0.1);
  c.record_every = 10;
  const Trajectory t = integrate_deterministic(smooth_field(b, 3, 2), c);
  REQUIRE(t.size() == 11);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.times[i] == doctest::Approx(0.01 * i).epsilon(1e-12));
}

TEST_CASE("a single jump with the drift disabled is the Marcus flow") {
  const auto b = build_basis(kPi, 4, 8);
  const NoiseCoefficients nc(VectorField::constant(b, {0, 0, 1}), VectorField(b));
  const LevyMeasure nu({{0.5, 1.0}});
  JumpPath path{{{0.5, 0}}, 1.0, 1.0, 0};
  SolverConfig c = config(1e-2, 1.0);
  c.enable_drift = false;
  const Trajectory t = integrate_sde(VectorField::constant(b, {1, 0, 0}), nc, nu, 1.0, path, c);
  REQUIRE(t.jumps.size() == 1);
  CHECK(t.jumps[0].t == 0.5);
  const VectorField expected = VectorField::constant(b, {std::cos(0.5), -std::sin(0.5), 0});
  CHECK(max_abs_diff(t.states.back(), expected) < 1e-12);
  CHECK(t.jumps[0].pre_h1 == doctest::Approx(t.jumps[0].post_h1));
  // Before the jump the state is untouched.
  CHECK(max_abs_diff(t.states[49], VectorField::constant(b, {1, 0, 0})) == 0.0);
}

TEST_CASE("jump conventions") {
  const auto b = build_basis(kPi, 4, 8);
  const NoiseCoefficients nc(VectorField::constant(b, {0, 0, 1}), VectorField(b));
  const LevyMeasure nu({{0.5, 1.0}});
  const VectorField u0 = VectorField::constant(b, {1, 0, 0});
  JumpPath path{{{0.5, 0}}, 1.0, 0.25, 0};
  SolverConfig c = config(1e-2, 1.0);
  c.enable_drift = false;
  const Trajectory literal = integrate_sde(u0, nc, nu, 0.25, path, c);
  const VectorField expected = u0 + 0.25 * (marcus_flow(0.5, u0, nc) - u0);
  CHECK(max_abs_diff(literal.states.back(), expected) < 1e-14);
  c.jump_convention = JumpConvention::rescaled_mark;
  const Trajectory rescaled = integrate_sde(u0, nc, nu, 0.25, path, c);
  CHECK(max_abs_diff(rescaled.states.back(), marcus_flow(0.125, u0, nc)) < 1e-14);
}

TEST_CASE("path validation") {
  const auto b = build_basis(kPi, 4, 8);
  const NoiseCoefficients nc{VectorField(b), VectorField(b)};
  const LevyMeasure nu({{0.5, 1.0}});
  const VectorField u0(b);
  const SolverConfig c = config(1e-2, 1.0);
  CHECK_THROWS_AS(integrate_sde(u0, nc, nu, 0.5, sample_prm(nu, 1.0, 1.0, 1), c), std::invalid_argument);
  CHECK_THROWS_AS(integrate_sde(u0, nc, nu, 1.0, sample_prm(nu, 2.0, 1.0, 1), c), std::invalid_argument);
  CHECK_THROWS_AS(integrate_sde(u0, nc, nu, 1.0, JumpPath{{{0.5, 3}}, 1.0, 1.0, 0}, c), std::invalid_argument);
  CHECK_THROWS_AS(integrate_sde(u0, nc, nu, 1.0, JumpPath{{{0.5, 0}, {0.2, 0}}, 1.0, 1.0, 0}, c),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_controlled(u0, nc, nu, 0.0, Control::constant(1.0, 1, 1.0), 1, c),
                  std::invalid_argument);
}

TEST_CASE("same seed gives bitwise identical trajectories") {
  const auto b = build_basis(kPi, 12, 24);
  const NoiseCoefficients nc(smooth_field(b, 3, 3, 1.0), smooth_field(b, 3, 4, 0.3));
  const LevyMeasure nu({{0.5, 2.0}, {-0.4, 1.0}});
  const VectorField u0 = smooth_field(b, 4, 5);
  const SolverConfig c = config(1e-3, 0.2);
  const Trajectory a = integrate_sde(u0, nc, nu, 1.0, sample_prm(nu, 0.2, 1.0, 77), c);
  const Trajectory d = integrate_sde(u0, nc, nu, 1.0, sample_prm(nu, 0.2, 1.0, 77), c);
  CHECK(bitwise_equal(a, d));
  const Control one = Control::constant(0.2, 2, 1.0);
  const Trajectory e = integrate_controlled(u0, nc, nu, 1.0, one, 77, c);
  CHECK(bitwise_equal(a, e));
}

TEST_CASE("no noise: every driver reduces to the deterministic flow") {
  const auto b = build_basis(kPi, 12, 24);
  const NoiseCoefficients nc(smooth_field(b, 3, 6, 1.0), smooth_field(b, 3, 7, 0.3));
  const LevyMeasure empty;
  const VectorField u0 = smooth_field(b, 4, 8);
  const SolverConfig c = config(1e-3, 0.2);
  const Trajectory det = integrate_deterministic(u0, c);
  const Trajectory sde = integrate_sde(u0, nc, empty, 1.0, sample_prm(empty, 0.2, 1.0, 1), c);
  const Trajectory skel = integrate_skeleton(u0, nc, empty, Control::constant(0.2, 0, 1.0), c);
  CHECK(sde.jumps.empty());
  CHECK(sup_h1_distance(det, sde) < 1e-10);
  CHECK(sup_h1_distance(det, skel) < 1e-10);
  const EnergyAudit audit = energy_audit(sde);
  CHECK(audit.passed);
}

TEST_CASE("skeleton with the identity control is the compensated drift") {
  const auto b = build_basis(kPi, 10, 20);
  const NoiseCoefficients nc(smooth_field(b, 3, 9, 1.0), smooth_field(b, 3, 10, 0.3));
  const LevyMeasure nu({{0.5, 1.0}, {-0.8, 0.4}});
  const VectorField u0 = smooth_field(b, 4, 11);
  const SolverConfig c = config(1e-3, 0.1);
  const Trajectory skel = integrate_skeleton(u0, nc, nu, Control::constant(0.1, 2, 1.0), c);
  const Trajectory ref = integrate_deterministic(
      u0, c, [&](double, const VectorField& u) { return compensator_b(u, nc, nu); });
  CHECK(sup_h1_distance(skel, ref) < 1e-12);
}

TEST_CASE("skeleton converges at second order in dt") {
  const auto b = build_basis(kPi, 12, 24);
  const NoiseCoefficients nc(smooth_field(b, 3, 12, 1.0), smooth_field(b, 3, 13, 0.3));
  const LevyMeasure nu({{0.5, 1.0}});
  const Control theta = Control::from_function(0.2, 1, 4, [](double t, std::size_t) { return 1.0 + t; });
  const VectorField u0 = smooth_field(b, 4, 14);
  std::vector<Trajectory> runs;
  for (std::size_t r : {10u, 20u, 40u}) {
    SolverConfig c = config(0.01 / r, 0.2);
    c.record_every = r;
    runs.push_back(integrate_skeleton(u0, nc, nu, theta, c));
  }
  const double d1 = sup_h1_distance(runs[0], runs[1]);
  const double d2 = sup_h1_distance(runs[1], runs[2]);
  CHECK(d1 > 0.0);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("reduced drift matches the compensated integral form") {
  // Two-mode system; the oracle integrates F + b - sum_j w_j G_j with RK4 and
  // applies eps G at the jumps.
  const auto b = build_basis(kPi, 2, 4);
  const NoiseCoefficients nc(VectorField::constant(b, {0.3, -0.2, 1.0}) + VectorField::single_mode(b, 1, 0, 0.4),
                             VectorField::single_mode(b, 1, 2, 0.3));
  const LevyMeasure nu({{0.6, 3.0}, {-0.9, 2.0}});
  const VectorField u0 = VectorField::constant(b, {0.4, 0.1, -0.3}) + VectorField::single_mode(b, 1, 1, 0.2);
  const double eps = 0.5, T = 0.1;
  JumpPath path = sample_prm(nu, T, eps, 3);
  REQUIRE(path.events.size() >= 1);

  auto rhs = [&](const VectorField& u) {
    VectorField f = drift(u) + compensator_b(u, nc, nu);
    for (const auto& a : nu.atoms()) f.add_scaled(-a.weight, jump_increment_G(a.mark, u, nc));
    return f;
  };
  VectorField u = u0;
  double t = 0.0;
  auto advance = [&](double until) {
    const int steps = std::max(1, static_cast<int>(std::ceil((until - t) / 1e-5)));
    const double h = (until - t) / steps;
    for (int i = 0; i < steps; ++i) {
      const VectorField k1 = rhs(u), k2 = rhs(u + (0.5 * h) * k1), k3 = rhs(u + (0.5 * h) * k2),
                        k4 = rhs(u + h * k3);
      u.add_scaled(h / 6, k1).add_scaled(h / 3, k2).add_scaled(h / 3, k3).add_scaled(h / 6, k4);
    }
    t = until;
  };
  for (const auto& ev : path.events) {
    advance(ev.t);
    u.add_scaled(eps, jump_increment_G(nu.atoms()[ev.atom].mark, u, nc));
  }
  advance(T);

  SolverConfig c = config(1e-5, T);
  c.record_every = 10000;
  const Trajectory traj = integrate_sde(u0, nc, nu, eps, path, c);
  CHECK(std::sqrt(sobolev_norm_sq(traj.states.back() - u, 1)) < 1e-8);
}

TEST_CASE("perturbation growth is linear in the perturbation") {
  const auto b = build_basis(kPi, 12, 24);
  const NoiseCoefficients nc(smooth_field(b, 3, 15, 1.0), smooth_field(b, 3, 16, 0.3));
  const LevyMeasure nu({{0.5, 2.0}, {-0.4, 1.0}});
  const VectorField u0 = smooth_field(b, 4, 17);
  const VectorField dir = (1.0 / std::sqrt(sobolev_norm_sq(smooth_field(b, 4, 18), 1))) * smooth_field(b, 4, 18);
  const SolverConfig c = config(1e-3, 0.1);
  const JumpPath path = sample_prm(nu, 0.1, 1.0, 19);
  const Trajectory base = integrate_sde(u0, nc, nu, 1.0, path, c);
  std::vector<double> ratios;
  for (double delta : {1e-4, 1e-5}) {
    const Trajectory pert = integrate_sde(u0 + delta * dir, nc, nu, 1.0, path, c);
    ratios.push_back(sup_h1_distance(base, pert) / delta);
  }
  CHECK(std::abs(ratios[0] / ratios[1] - 1.0) < 0.1);
}

TEST_CASE("blow-up stops the run and keeps the offending state") {
  const auto b = build_basis(kPi, 4, 8);
  SolverConfig c = config(1e-3, 1.0);
  c.blowup_cap = 1e-3;
  const VectorField u0 = VectorField::single_mode(b, 1, 0, 1e-4);
  const Trajectory t = integrate_deterministic(u0, c);
  CHECK(t.status == RunStatus::blowup);
  CHECK(t.times.back() < 1.0);
  CHECK(std::sqrt(t.h1_sq.back()) > 1e-3);
}

TEST_CASE("weak form holds along a computed trajectory") {
  const auto b = build_basis(kPi, 16, 32);
  const VectorField u0 = smooth_field(b, 4, 20, 0.8);
  const Trajectory t = integrate_deterministic(u0, config(1e-4, 0.1));
  for (std::size_t k = 0; k < 4; ++k) CHECK(weak_form_residual(t, k) < 1e-4);
}
