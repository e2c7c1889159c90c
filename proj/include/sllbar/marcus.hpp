#pragma once

// Marcus jump machinery for the affine jump field J(u) = u x h + g.
//
// The flow Phi(t, l, u) solves du/ds = l J(u) for s in [0, t]. Because J acts
// pointwise, the flow is solved independently at every grid node and the
// result is truncated back to N modes once, after the time-t evaluation.
//
//   G(l, u) = Phi(l, u) - u
//   H(l, u) = Phi(l, u) - u - l J(u)
//   b(u)    = sum_j w_j H(l_j, u)

#include <cstddef>

#include "sllbar/field.hpp"
#include "sllbar/noise.hpp"

namespace sllbar {

struct NoiseCoefficients {
  NoiseCoefficients(VectorField h, VectorField g);

  VectorField h;
  VectorField g;
  /// Cached grid samples of h and g (component-major).
  std::vector<double> h_grid;
  std::vector<double> g_grid;
  /// max_x |h(x)| over the collocation grid.
  double h_sup = 0.0;

  const BasisPtr& basis_ptr() const { return h.basis_ptr(); }
};

enum class FlowMethod { closed_form, rk4 };

inline constexpr int kDefaultRk4Steps = 100;

/// Pi_N(u x h + g)
VectorField jump_field(const VectorField& u, const NoiseCoefficients& nc);

/// Time-1 Marcus flow Phi(l, u).
VectorField marcus_flow(double l, const VectorField& u, const NoiseCoefficients& nc,
                        FlowMethod method = FlowMethod::closed_form,
                        int rk4_steps = kDefaultRk4Steps);

/// Time-t flow Phi(t, l, u). Equals Phi(1, t l, u) for the closed form.
VectorField marcus_flow_time(double t, double l, const VectorField& u,
                             const NoiseCoefficients& nc,
                             FlowMethod method = FlowMethod::closed_form,
                             int rk4_steps = kDefaultRk4Steps);

/// Pointwise closed-form solution of v' = l (v x h + g) over unit time.
Vec3 marcus_flow_point(double l, const Vec3& v, const Vec3& h, const Vec3& g);

VectorField jump_increment_G(double l, const VectorField& u, const NoiseCoefficients& nc,
                             FlowMethod method = FlowMethod::closed_form);

VectorField marcus_remainder_H(double l, const VectorField& u, const NoiseCoefficients& nc,
                               FlowMethod method = FlowMethod::closed_form);

VectorField compensator_b(const VectorField& u, const NoiseCoefficients& nc,
                          const LevyMeasure& nu,
                          FlowMethod method = FlowMethod::closed_form);

/// Flow of the projected field J_n = Pi_n J, integrated with RK4 in coefficient
/// space from Pi_n u. This is the finite-dimensional Galerkin flow.
VectorField projected_marcus_flow(double l, const VectorField& u, const NoiseCoefficients& nc,
                                  std::size_t n, int rk4_steps = kDefaultRk4Steps);

}  // namespace sllbar
