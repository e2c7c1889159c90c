#include "sllbar/marcus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sllbar {

namespace {

void require_mark(double l) {
  if (!std::isfinite(l) || std::abs(l) > 1.0) {
    throw std::invalid_argument("marcus_flow: mark must satisfy |l| <= 1");
  }
}

void require_finite(const VectorField& u, const char* what) {
  if (!u.is_finite()) throw std::domain_error(std::string(what) + ": non-finite state");
}

Vec3 jump_vector(double l, const Vec3& v, const Vec3& h, const Vec3& g) {
  return l * (cross(v, h) + g);
}

Vec3 rk4_point(double t, double l, Vec3 v, const Vec3& h, const Vec3& g, int steps) {
  const double dt = t / static_cast<double>(steps);
  for (int i = 0; i < steps; ++i) {
    const Vec3 k1 = jump_vector(l, v, h, g);
    const Vec3 k2 = jump_vector(l, v + (0.5 * dt) * k1, h, g);
    const Vec3 k3 = jump_vector(l, v + (0.5 * dt) * k2, h, g);
    const Vec3 k4 = jump_vector(l, v + dt * k3, h, g);
    v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

}  // namespace

NoiseCoefficients::NoiseCoefficients(VectorField h_in, VectorField g_in)
    : h(std::move(h_in)), g(std::move(g_in)) {
  require_same_basis(h, g);
  require_finite(h, "NoiseCoefficients");
  require_finite(g, "NoiseCoefficients");
  h_grid = h.grid_values();
  g_grid = g.grid_values();
  const std::size_t m = h.basis().grid_points();
  for (std::size_t i = 0; i < m; ++i) h_sup = std::max(h_sup, norm(grid_point(h_grid, m, i)));
}

VectorField jump_field(const VectorField& u, const NoiseCoefficients& nc) {
  require_same_basis(u, nc.h);
  const std::size_t m = u.basis().grid_points();
  auto ug = u.grid_values();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3 v = grid_point(ug, m, i);
    set_grid_point(ug, m, i,
                   cross(v, grid_point(nc.h_grid, m, i)) + grid_point(nc.g_grid, m, i));
  }
  return VectorField::from_grid(u.basis_ptr(), ug);
}

Vec3 marcus_flow_point(double l, const Vec3& v, const Vec3& h, const Vec3& g) {
  // v' = w x v + f with w = -l h and f = l g.
  const Vec3 w = (-l) * h;
  const Vec3 f = l * g;
  const double theta = norm(w);
  if (theta == 0.0) return v + f;

  const Vec3 axis = (1.0 / theta) * w;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double one_minus_c = 2.0 * std::sin(0.5 * theta) * std::sin(0.5 * theta);

  const Vec3 rotated = c * v + s * cross(axis, v) + (one_minus_c * dot(axis, v)) * axis;

  const Vec3 f_par = dot(axis, f) * axis;
  const Vec3 f_perp = f - f_par;
  const Vec3 forced =
      f_par + (s / theta) * f_perp + (one_minus_c / theta) * cross(axis, f_perp);
  return rotated + forced;
}

VectorField marcus_flow_time(double t, double l, const VectorField& u,
                             const NoiseCoefficients& nc, FlowMethod method,
                             int rk4_steps) {
  require_mark(l);
  require_same_basis(u, nc.h);
  require_finite(u, "marcus_flow");
  if (!(t >= 0.0)) throw std::invalid_argument("marcus_flow: flow time must be nonnegative");
  if (l == 0.0 || t == 0.0) return u;
  if (method == FlowMethod::rk4 && rk4_steps < 1) {
    throw std::invalid_argument("marcus_flow: rk4 needs at least one step");
  }

  const std::size_t m = u.basis().grid_points();
  auto ug = u.grid_values();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3 v = grid_point(ug, m, i);
    const Vec3 h = grid_point(nc.h_grid, m, i);
    const Vec3 g = grid_point(nc.g_grid, m, i);
    const Vec3 out = method == FlowMethod::closed_form ? marcus_flow_point(t * l, v, h, g)
                                                       : rk4_point(t, l, v, h, g, rk4_steps);
    set_grid_point(ug, m, i, out);
  }
  return VectorField::from_grid(u.basis_ptr(), ug);
}

VectorField marcus_flow(double l, const VectorField& u, const NoiseCoefficients& nc,
                        FlowMethod method, int rk4_steps) {
  return marcus_flow_time(1.0, l, u, nc, method, rk4_steps);
}

VectorField jump_increment_G(double l, const VectorField& u, const NoiseCoefficients& nc,
                             FlowMethod method) {
  if (l == 0.0) {
    require_same_basis(u, nc.h);
    return VectorField(u.basis_ptr());
  }
  return marcus_flow(l, u, nc, method) - u;
}

VectorField marcus_remainder_H(double l, const VectorField& u, const NoiseCoefficients& nc,
                               FlowMethod method) {
  if (l == 0.0) {
    require_same_basis(u, nc.h);
    return VectorField(u.basis_ptr());
  }
  VectorField out = marcus_flow(l, u, nc, method) - u;
  out.add_scaled(-l, jump_field(u, nc));
  return out;
}

VectorField compensator_b(const VectorField& u, const NoiseCoefficients& nc,
                          const LevyMeasure& nu, FlowMethod method) {
  VectorField out(u.basis_ptr());
  if (nu.atoms().empty()) return out;
  const VectorField j = jump_field(u, nc);
  for (const auto& atom : nu.atoms()) {
    out.add_scaled(atom.weight, marcus_flow(atom.mark, u, nc, method));
    out.add_scaled(-atom.weight, u);
    out.add_scaled(-atom.weight * atom.mark, j);
  }
  return out;
}

VectorField projected_marcus_flow(double l, const VectorField& u, const NoiseCoefficients& nc,
                                  std::size_t n, int rk4_steps) {
  require_mark(l);
  require_same_basis(u, nc.h);
  if (n > u.modes()) throw std::invalid_argument("projected_marcus_flow: n exceeds modes");
  if (rk4_steps < 1) throw std::invalid_argument("projected_marcus_flow: rk4 needs steps");

  VectorField w = project(u, n);
  if (l == 0.0) return w;

  auto field = [&](const VectorField& v) {
    VectorField out = project(jump_field(v, nc), n);
    out *= l;
    return out;
  };
  const double dt = 1.0 / static_cast<double>(rk4_steps);
  for (int i = 0; i < rk4_steps; ++i) {
    const VectorField k1 = field(w);
    const VectorField k2 = field(w + (0.5 * dt) * k1);
    const VectorField k3 = field(w + (0.5 * dt) * k2);
    const VectorField k4 = field(w + dt * k3);
    w.add_scaled(dt / 6.0, k1);
    w.add_scaled(dt / 3.0, k2);
    w.add_scaled(dt / 3.0, k3);
    w.add_scaled(dt / 6.0, k4);
  }
  return w;
}

}  // namespace sllbar
