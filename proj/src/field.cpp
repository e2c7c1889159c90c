#include "sllbar/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sllbar {

VectorField::VectorField(BasisPtr basis) : basis_(std::move(basis)) {
  if (!basis_) throw std::invalid_argument("VectorField: null basis");
  coeffs_.assign(3 * basis_->modes(), 0.0);
}

VectorField::VectorField(BasisPtr basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw std::invalid_argument("VectorField: null basis");
  if (coeffs_.size() != 3 * basis_->modes()) {
    throw std::invalid_argument("VectorField: expected 3 * modes coefficients");
  }
}

VectorField VectorField::from_grid(BasisPtr basis, std::span<const double> grid_values) {
  const std::size_t m = basis->grid_points();
  if (grid_values.size() != 3 * m) {
    throw std::invalid_argument("VectorField::from_grid: expected 3 * grid_points values");
  }
  VectorField out(basis);
  for (int c = 0; c < 3; ++c) {
    basis->forward(grid_values.subspan(c * m, m), out.component(c));
  }
  return out;
}

VectorField VectorField::constant(BasisPtr basis, const Vec3& v) {
  VectorField out(basis);
  const double scale = std::sqrt(basis->length());
  for (int c = 0; c < 3; ++c) out(c, 0) = v[c] * scale;
  return out;
}

VectorField VectorField::single_mode(BasisPtr basis, std::size_t k, int component,
                                     double amplitude) {
  if (k >= basis->modes()) throw std::invalid_argument("single_mode: mode index out of range");
  if (component < 0 || component > 2) {
    throw std::invalid_argument("single_mode: component must be 0, 1 or 2");
  }
  VectorField out(basis);
  out(component, k) = amplitude;
  return out;
}

std::span<const double> VectorField::component(int c) const {
  return std::span<const double>(coeffs_).subspan(c * modes(), modes());
}

std::span<double> VectorField::component(int c) {
  return std::span<double>(coeffs_).subspan(c * modes(), modes());
}

std::vector<double> VectorField::grid_values() const {
  const std::size_t m = basis_->grid_points();
  std::vector<double> out(3 * m);
  for (int c = 0; c < 3; ++c) {
    basis_->inverse(component(c), std::span<double>(out).subspan(c * m, m));
  }
  return out;
}

bool VectorField::is_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](double v) { return std::isfinite(v); });
}

VectorField& VectorField::operator+=(const VectorField& other) {
  require_same_basis(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  require_same_basis(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& v : coeffs_) v *= s;
  return *this;
}

VectorField& VectorField::add_scaled(double s, const VectorField& other) {
  require_same_basis(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

void require_same_basis(const VectorField& a, const VectorField& b) {
  if (a.basis_ptr() != b.basis_ptr()) {
    const Basis& x = a.basis();
    const Basis& y = b.basis();
    if (x.modes() != y.modes() || x.grid_points() != y.grid_points() ||
        x.length() != y.length()) {
      throw std::invalid_argument("fields do not share a basis");
    }
  }
}

double sobolev_norm_sq(const VectorField& u, int s) {
  double total = 0.0;
  for (int c = 0; c < 3; ++c) total += sobolev_norm_sq(u.component(c), u.basis(), s);
  return total;
}

double max_abs_diff(const VectorField& a, const VectorField& b) {
  require_same_basis(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    worst = std::max(worst, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  }
  return worst;
}

VectorField project(const VectorField& u, std::size_t n) {
  if (n > u.modes()) throw std::invalid_argument("project: n exceeds available modes");
  VectorField out = u;
  for (int c = 0; c < 3; ++c) {
    auto comp = out.component(c);
    std::fill(comp.begin() + static_cast<std::ptrdiff_t>(n), comp.end(), 0.0);
  }
  return out;
}

namespace {

VectorField scale_modes(const VectorField& u, auto&& multiplier) {
  VectorField out = u;
  const Basis& basis = u.basis();
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < u.modes(); ++k) out(c, k) *= multiplier(basis.eigenvalue(k));
  }
  return out;
}

void require_finite_grid(std::span<const double> g, const char* what) {
  for (double v : g) {
    if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": non-finite grid value");
  }
}

// Grid-side products shared by cubic, cross_laplacian and the drift remainder.
struct NonlinearProducts {
  VectorField cubic;
  VectorField cross;
};

NonlinearProducts nonlinear_products(const VectorField& u, bool want_cross) {
  const std::size_t m = u.basis().grid_points();
  const auto ug = u.grid_values();
  std::vector<double> lap_g;
  if (want_cross) lap_g = laplacian(u).grid_values();

  std::vector<double> cubic_g(3 * m);
  std::vector<double> cross_g(want_cross ? 3 * m : 0);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3 v = grid_point(ug, m, i);
    set_grid_point(cubic_g, m, i, dot(v, v) * v);
    if (want_cross) set_grid_point(cross_g, m, i, cross(v, grid_point(lap_g, m, i)));
  }
  NonlinearProducts out{VectorField::from_grid(u.basis_ptr(), cubic_g),
                        VectorField(u.basis_ptr())};
  if (want_cross) out.cross = VectorField::from_grid(u.basis_ptr(), cross_g);
  return out;
}

}  // namespace

VectorField laplacian(const VectorField& u) {
  return scale_modes(u, [](double lambda) { return -lambda; });
}

VectorField bilaplacian(const VectorField& u) {
  return laplacian(laplacian(u));
}

VectorField cubic(const VectorField& u) {
  require_finite_grid(u.grid_values(), "cubic");
  return nonlinear_products(u, false).cubic;
}

VectorField cross_laplacian(const VectorField& u) {
  require_finite_grid(u.grid_values(), "cross_laplacian");
  return nonlinear_products(u, true).cross;
}

VectorField effective_field(const VectorField& u) {
  VectorField out = laplacian(u);
  out.add_scaled(2.0, u);
  out.add_scaled(-2.0, cubic(u));
  return out;
}

std::vector<double> linear_multiplier(const Basis& basis) {
  std::vector<double> ell(basis.modes());
  for (std::size_t k = 0; k < ell.size(); ++k) {
    const double lambda = basis.eigenvalue(k);
    ell[k] = lambda - lambda * lambda + 2.0;
  }
  return ell;
}

VectorField nonlinear_remainder(const VectorField& u) {
  auto products = nonlinear_products(u, true);
  VectorField out = scale_modes(products.cubic, [](double lambda) { return -2.0 * (1.0 + lambda); });
  out -= products.cross;
  return out;
}

VectorField drift(const VectorField& u) {
  const auto ell = linear_multiplier(u.basis());
  VectorField out = nonlinear_remainder(u);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < u.modes(); ++k) out(c, k) += ell[k] * u(c, k);
  }
  return out;
}

}  // namespace sllbar
