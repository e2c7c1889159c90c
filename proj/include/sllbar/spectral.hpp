#pragma once

// Neumann-Laplacian cosine basis on an interval [0, L].
//
//   e_0(x) = (1/L)^{1/2},  e_k(x) = (2/L)^{1/2} cos(k pi x / L),  lambda_k = (k pi / L)^2
//
// Collocation uses the midpoint grid x_m = (m + 1/2) L / M with M >= 2N. The
// midpoint rule integrates cos(j pi x / L) exactly for 0 < j < 2M, so forward()
// is the exact L2 projection of any cosine series with fewer than M modes, and
// the cubic and quartic products of an N-mode field are projected without
// aliasing.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sllbar {

class Basis {
 public:
  Basis(double length, std::size_t modes, std::size_t grid_points);

  double length() const { return length_; }
  std::size_t modes() const { return modes_; }
  std::size_t grid_points() const { return grid_points_; }

  std::span<const double> eigenvalues() const { return eigenvalues_; }
  double eigenvalue(std::size_t k) const { return eigenvalues_[k]; }
  std::span<const double> grid() const { return grid_; }

  /// Quadrature weight of each midpoint node, L / M.
  double weight() const { return length_ / static_cast<double>(grid_points_); }

  /// e_k evaluated at an arbitrary point.
  double eigenfunction(std::size_t k, double x) const;
  /// d/dx e_k evaluated at an arbitrary point.
  double eigenfunction_derivative(std::size_t k, double x) const;

  /// Grid values -> N coefficients (midpoint quadrature of (f, e_k)).
  std::vector<double> forward(std::span<const double> grid_values) const;
  void forward(std::span<const double> grid_values, std::span<double> coeffs) const;

  /// N coefficients -> grid values.
  std::vector<double> inverse(std::span<const double> coeffs) const;
  void inverse(std::span<const double> coeffs, std::span<double> grid_values) const;

  /// Synthesis of sum_k c_k e_k at arbitrary points (and its x-derivative).
  std::vector<double> evaluate(std::span<const double> coeffs,
                               std::span<const double> points) const;
  std::vector<double> evaluate_derivative(std::span<const double> coeffs,
                                          std::span<const double> points) const;

 private:
  double length_;
  std::size_t modes_;
  std::size_t grid_points_;
  std::vector<double> eigenvalues_;
  std::vector<double> grid_;
  // synthesis_[m * N + k] = e_k(x_m)
  std::vector<double> synthesis_;
};

using BasisPtr = std::shared_ptr<const Basis>;

BasisPtr build_basis(double length, std::size_t modes, std::size_t grid_points);

/// Galerkin truncation: zero every entry with index >= n.
std::vector<double> project(std::span<const double> coeffs, std::size_t n);

/// sum_k (1 + lambda_k)^s c_k^2 for a single scalar coefficient vector.
double sobolev_norm_sq(std::span<const double> coeffs, const Basis& basis, int s);

}  // namespace sllbar
