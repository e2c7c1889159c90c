#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sllbar {

/// Piecewise-constant control theta_j(t), one channel per Levy atom.
///
/// Breakpoints 0 = t_0 < ... < t_m = T; value(i, j) holds on [t_i, t_{i+1}).
/// The last piece is closed on the right.
class Control {
 public:
  Control(std::vector<double> breakpoints, std::size_t atoms, std::vector<double> values);

  /// theta_j(t) = value on [0, T].
  static Control constant(double horizon, std::size_t atoms, double value);
  /// Sample f(t, j) at piece midpoints on a uniform partition.
  static Control from_function(double horizon, std::size_t atoms, std::size_t pieces,
                               const std::function<double(double, std::size_t)>& f);

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::size_t pieces() const { return breakpoints_.size() - 1; }
  std::size_t atoms() const { return atoms_; }
  double horizon() const { return breakpoints_.back(); }

  double value(std::size_t piece, std::size_t atom) const { return values_[piece * atoms_ + atom]; }
  double operator()(double t, std::size_t atom) const;
  std::size_t piece_at(double t) const;

  double sup(std::size_t atom) const;
  double inf(std::size_t atom) const;

  /// True when every value lies in [1/n, n].
  bool is_bounded(double n) const;

 private:
  std::vector<double> breakpoints_;
  std::size_t atoms_;
  std::vector<double> values_;
};

}  // namespace sllbar
