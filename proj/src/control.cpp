#include "sllbar/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sllbar {

Control::Control(std::vector<double> breakpoints, std::size_t atoms, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), atoms_(atoms), values_(std::move(values)) {
  if (breakpoints_.size() < 2) throw std::invalid_argument("Control: need at least one piece");
  if (breakpoints_.front() != 0.0) throw std::invalid_argument("Control: first breakpoint must be 0");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1]) || !std::isfinite(breakpoints_[i])) {
      throw std::invalid_argument("Control: breakpoints must be strictly increasing");
    }
  }
  if (values_.size() != pieces() * atoms_) {
    throw std::invalid_argument("Control: expected pieces * atoms values");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("Control: values must be finite and nonnegative");
    }
  }
}

Control Control::constant(double horizon, std::size_t atoms, double value) {
  return Control({0.0, horizon}, atoms, std::vector<double>(atoms, value));
}

Control Control::from_function(double horizon, std::size_t atoms, std::size_t pieces,
                               const std::function<double(double, std::size_t)>& f) {
  if (pieces == 0) throw std::invalid_argument("Control::from_function: need pieces >= 1");
  std::vector<double> breaks(pieces + 1);
  for (std::size_t i = 0; i <= pieces; ++i) {
    breaks[i] = horizon * static_cast<double>(i) / static_cast<double>(pieces);
  }
  breaks.back() = horizon;
  std::vector<double> values(pieces * atoms);
  for (std::size_t i = 0; i < pieces; ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    for (std::size_t j = 0; j < atoms; ++j) values[i * atoms + j] = f(mid, j);
  }
  return Control(std::move(breaks), atoms, std::move(values));
}

std::size_t Control::piece_at(double t) const {
  if (t <= breakpoints_.front()) return 0;
  if (t >= breakpoints_.back()) return pieces() - 1;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

double Control::operator()(double t, std::size_t atom) const {
  if (atom >= atoms_) throw std::out_of_range("Control: atom index out of range");
  return value(piece_at(t), atom);
}

double Control::sup(std::size_t atom) const {
  double best = 0.0;
  for (std::size_t i = 0; i < pieces(); ++i) best = std::max(best, value(i, atom));
  return best;
}

double Control::inf(std::size_t atom) const {
  double best = value(0, atom);
  for (std::size_t i = 1; i < pieces(); ++i) best = std::min(best, value(i, atom));
  return best;
}

bool Control::is_bounded(double n) const {
  if (!(n >= 1.0)) return false;
  return std::all_of(values_.begin(), values_.end(),
                     [n](double v) { return v >= 1.0 / n && v <= n; });
}

}  // namespace sllbar
