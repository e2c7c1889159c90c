#pragma once

// Finite atomic Levy measures and Poisson random measure sampling.
//
// The time-scaled PRM of intensity eps^{-1} nu(dl) dt is sampled atom by atom;
// the controlled PRM of intensity eps^{-1} phi(t, l) nu(dl) dt is obtained by
// thinning a dominating PRM of intensity eps^{-1} sup_t phi(t, l) nu(dl) dt.
// Every atom draws from its own stream derived from (seed, atom index), so a
// path depends only on its seed.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sllbar/control.hpp"

namespace sllbar {

struct LevyAtom {
  double mark;
  double weight;
};

class LevyMeasure {
 public:
  LevyMeasure() = default;
  explicit LevyMeasure(std::vector<LevyAtom> atoms);

  const std::vector<LevyAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  /// nu(B) = sum_j w_j
  double total_mass() const;
  /// m_1 = sum_j w_j l_j
  double first_moment() const;

 private:
  std::vector<LevyAtom> atoms_;
};

struct JumpEvent {
  double t;
  std::size_t atom;

  bool operator==(const JumpEvent&) const = default;
};

struct JumpPath {
  std::vector<JumpEvent> events;
  double horizon = 0.0;
  double epsilon = 1.0;
  std::uint64_t seed = 0;

  bool operator==(const JumpPath&) const = default;
};

/// SplitMix64 mix of a master seed with stream identifiers.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

JumpPath sample_prm(const LevyMeasure& nu, double horizon, double epsilon, std::uint64_t seed);

/// Thinning against sup_t phi_j. phi must lie in [1/control_bound, control_bound].
JumpPath sample_controlled_prm(const LevyMeasure& nu, const Control& phi, double horizon,
                               double epsilon, std::uint64_t seed,
                               double control_bound = 100.0);

}  // namespace sllbar
