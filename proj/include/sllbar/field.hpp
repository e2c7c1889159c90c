#pragma once

// R^3-valued fields in the cosine basis and the LLBar operators.
//
// Constants are fixed at chi = 1/4 and lambda_r = lambda_e = gamma = 1:
//
//   H_eff = Lap u + 2 (1 - |u|^2) u
//   F(u)  = -Lap u - Lap^2 u + 2 (1 - |u|^2) u + 2 Lap(|u|^2 u) - u x Lap u
//
// F is split into the diagonal linear part l_k = lambda_k - lambda_k^2 + 2 and
// a dealiased nonlinear remainder. Every nonlinear product is formed on the
// collocation grid and truncated back to N modes.

#include <cstddef>
#include <span>
#include <vector>

#include "sllbar/spectral.hpp"
#include "sllbar/vec3.hpp"

namespace sllbar {

class VectorField {
 public:
  explicit VectorField(BasisPtr basis);
  /// Coefficients in component-major order: index c * N + k.
  VectorField(BasisPtr basis, std::vector<double> coeffs);

  /// Forward transform of grid samples (component-major, 3 * M values).
  static VectorField from_grid(BasisPtr basis, std::span<const double> grid_values);
  /// Constant field v everywhere on the interval.
  static VectorField constant(BasisPtr basis, const Vec3& v);
  /// amplitude * e_k in component c.
  static VectorField single_mode(BasisPtr basis, std::size_t k, int component,
                                 double amplitude = 1.0);

  const Basis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  std::size_t modes() const { return basis_->modes(); }

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  std::span<const double> component(int c) const;
  std::span<double> component(int c);

  double& operator()(int c, std::size_t k) { return coeffs_[c * modes() + k]; }
  double operator()(int c, std::size_t k) const { return coeffs_[c * modes() + k]; }

  /// Grid samples, component-major, 3 * M values.
  std::vector<double> grid_values() const;

  bool is_finite() const;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);
  /// this += s * other
  VectorField& add_scaled(double s, const VectorField& other);

 private:
  BasisPtr basis_;
  std::vector<double> coeffs_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

void require_same_basis(const VectorField& a, const VectorField& b);

/// sum_k (1 + lambda_k)^s |c_k|^2 summed over the three components.
double sobolev_norm_sq(const VectorField& u, int s);

/// Largest coefficient difference; fields must share a basis.
double max_abs_diff(const VectorField& a, const VectorField& b);

/// Pointwise access to grid samples laid out component-major.
inline Vec3 grid_point(std::span<const double> g, std::size_t grid_points, std::size_t m) {
  return {g[m], g[grid_points + m], g[2 * grid_points + m]};
}
inline void set_grid_point(std::span<double> g, std::size_t grid_points, std::size_t m,
                           const Vec3& v) {
  g[m] = v[0];
  g[grid_points + m] = v[1];
  g[2 * grid_points + m] = v[2];
}

/// Galerkin truncation Pi_n applied per component.
VectorField project(const VectorField& u, std::size_t n);

VectorField laplacian(const VectorField& u);
VectorField bilaplacian(const VectorField& u);

/// Pi_N(|u|^2 u)
VectorField cubic(const VectorField& u);
/// Pi_N(u x Lap u)
VectorField cross_laplacian(const VectorField& u);

/// Truncated effective field Lap u + 2u - 2 Pi_N(|u|^2 u).
VectorField effective_field(const VectorField& u);

/// l_k = lambda_k - lambda_k^2 + 2.
std::vector<double> linear_multiplier(const Basis& basis);

/// F(u) minus its diagonal linear part:
/// -2 (1 + lambda) Pi_N(|u|^2 u) - Pi_N(u x Lap u).
VectorField nonlinear_remainder(const VectorField& u);

/// Full LLBar drift F(u).
VectorField drift(const VectorField& u);

}  // namespace sllbar
