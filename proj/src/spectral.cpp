#include "sllbar/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sllbar {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (got " +
                                std::to_string(got) + ", expected " +
                                std::to_string(want) + ")");
  }
}

}  // namespace

Basis::Basis(double length, std::size_t modes, std::size_t grid_points)
    : length_(length), modes_(modes), grid_points_(grid_points) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("build_basis: length must be positive and finite");
  }
  if (modes < 1) {
    throw std::invalid_argument("build_basis: at least one mode is required");
  }
  if (grid_points < 2 * modes) {
    throw std::invalid_argument("build_basis: invalid dimension, grid_points (" +
                                std::to_string(grid_points) +
                                ") < 2 * modes (" + std::to_string(2 * modes) +
                                ") violates dealiasing");
  }

  eigenvalues_.resize(modes_);
  for (std::size_t k = 0; k < modes_; ++k) {
    const double wavenumber = static_cast<double>(k) * std::numbers::pi / length_;
    eigenvalues_[k] = wavenumber * wavenumber;
  }

  grid_.resize(grid_points_);
  const double h = weight();
  for (std::size_t m = 0; m < grid_points_; ++m) {
    grid_[m] = (static_cast<double>(m) + 0.5) * h;
  }

  synthesis_.resize(grid_points_ * modes_);
  for (std::size_t m = 0; m < grid_points_; ++m) {
    for (std::size_t k = 0; k < modes_; ++k) {
      synthesis_[m * modes_ + k] = eigenfunction(k, grid_[m]);
    }
  }
}

double Basis::eigenfunction(std::size_t k, double x) const {
  if (k == 0) return std::sqrt(1.0 / length_);
  return std::sqrt(2.0 / length_) *
         std::cos(static_cast<double>(k) * std::numbers::pi * x / length_);
}

double Basis::eigenfunction_derivative(std::size_t k, double x) const {
  if (k == 0) return 0.0;
  const double wavenumber = static_cast<double>(k) * std::numbers::pi / length_;
  return -std::sqrt(2.0 / length_) * wavenumber * std::sin(wavenumber * x);
}

std::vector<double> Basis::forward(std::span<const double> grid_values) const {
  std::vector<double> coeffs(modes_);
  forward(grid_values, coeffs);
  return coeffs;
}

void Basis::forward(std::span<const double> grid_values, std::span<double> coeffs) const {
  require_size(grid_values.size(), grid_points_, "forward");
  require_size(coeffs.size(), modes_, "forward");
  std::fill(coeffs.begin(), coeffs.end(), 0.0);
  for (std::size_t m = 0; m < grid_points_; ++m) {
    const double f = grid_values[m];
    const double* row = &synthesis_[m * modes_];
    for (std::size_t k = 0; k < modes_; ++k) coeffs[k] += f * row[k];
  }
  const double h = weight();
  for (auto& c : coeffs) c *= h;
}

std::vector<double> Basis::inverse(std::span<const double> coeffs) const {
  std::vector<double> values(grid_points_);
  inverse(coeffs, values);
  return values;
}

void Basis::inverse(std::span<const double> coeffs, std::span<double> grid_values) const {
  require_size(coeffs.size(), modes_, "inverse");
  require_size(grid_values.size(), grid_points_, "inverse");
  for (std::size_t m = 0; m < grid_points_; ++m) {
    const double* row = &synthesis_[m * modes_];
    double sum = 0.0;
    for (std::size_t k = 0; k < modes_; ++k) sum += coeffs[k] * row[k];
    grid_values[m] = sum;
  }
}

std::vector<double> Basis::evaluate(std::span<const double> coeffs,
                                    std::span<const double> points) const {
  require_size(coeffs.size(), modes_, "evaluate");
  std::vector<double> out(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < modes_; ++k) out[i] += coeffs[k] * eigenfunction(k, points[i]);
  }
  return out;
}

std::vector<double> Basis::evaluate_derivative(std::span<const double> coeffs,
                                               std::span<const double> points) const {
  require_size(coeffs.size(), modes_, "evaluate_derivative");
  std::vector<double> out(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 1; k < modes_; ++k) {
      out[i] += coeffs[k] * eigenfunction_derivative(k, points[i]);
    }
  }
  return out;
}

BasisPtr build_basis(double length, std::size_t modes, std::size_t grid_points) {
  return std::make_shared<const Basis>(length, modes, grid_points);
}

std::vector<double> project(std::span<const double> coeffs, std::size_t n) {
  if (n > coeffs.size()) {
    throw std::invalid_argument("project: n = " + std::to_string(n) +
                                " exceeds available modes " +
                                std::to_string(coeffs.size()));
  }
  std::vector<double> out(coeffs.begin(), coeffs.end());
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(n), out.end(), 0.0);
  return out;
}

double sobolev_norm_sq(std::span<const double> coeffs, const Basis& basis, int s) {
  if (s < 0 || s > 3) {
    throw std::invalid_argument("sobolev_norm_sq: order s must be in {0,1,2,3}");
  }
  require_size(coeffs.size(), basis.modes(), "sobolev_norm_sq");
  double total = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double weight = std::pow(1.0 + basis.eigenvalue(k), s);
    total += weight * coeffs[k] * coeffs[k];
  }
  return total;
}

}  // namespace sllbar
