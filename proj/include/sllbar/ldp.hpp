#pragma once

// Rate cost of a control and empirical checks of the two sufficient
// conditions for the small-noise large deviation principle.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sllbar/control.hpp"
#include "sllbar/integrator.hpp"
#include "sllbar/marcus.hpp"
#include "sllbar/noise.hpp"

namespace sllbar {

/// g(x) = x log x - x + 1 with g(0) = 1.
double entropy_integrand(double x);

/// L_T(theta) = sum_j w_j sum_i (t_{i+1} - t_i) g(theta_{i,j}).
double rate_cost(const Control& theta, const LevyMeasure& nu);

struct PathDistance {
  double sup_h1 = 0.0;  // sup_t ||u - v||_{H^1}
  double l2_h3 = 0.0;   // (int_0^T ||u - v||_{H^3}^2 dt)^{1/2}
  double metric() const { return sup_h1 + l2_h3; }
};

/// Distance in C([0,T]; H^1) cap L^2(0,T; H^3) between two trajectories that
/// share snapshot times. Both must keep fields.
PathDistance z_distance(const Trajectory& a, const Trajectory& b);
/// Same quantities for the trajectory itself (distance from zero).
PathDistance z_norm(const Trajectory& a);

struct ConvergenceCase {
  double parameter = 0.0;  // n for condition 1, epsilon for condition 2
  double sup_h1 = 0.0;
  double l2_h3 = 0.0;
  double metric = 0.0;
  double metric_se = 0.0;
  double excluded_fraction = 0.0;
  double cost = 0.0;
  std::size_t samples = 0;
};

struct ConvergenceReport {
  std::vector<ConvergenceCase> cases;
  bool monotone = false;
  bool below_threshold = false;
  bool passed = false;
  double threshold = 0.0;
  std::string verdict;
};

struct Condition1Options {
  /// Every control must satisfy rate_cost <= cost_bound (membership in S^K).
  double cost_bound = 10.0;
  /// Final distance must fall below this value.
  double threshold = 1.0;
};

/// Skeleton solutions for each theta_n against the limit theta. The report
/// parameter column holds the sequence index (or the supplied labels).
ConvergenceReport check_condition1(const std::vector<Control>& sequence, const Control& limit,
                                   const VectorField& u0, const NoiseCoefficients& nc,
                                   const LevyMeasure& nu, const SolverConfig& config,
                                   const Condition1Options& options = {},
                                   const std::vector<double>& labels = {});

struct Condition2Options {
  std::size_t ensemble = 64;
  std::uint64_t master_seed = 1;
  /// Trajectories whose Z-norm exceeds exclusion_factor times the skeleton's
  /// are excluded (stopping-time truncation).
  double exclusion_factor = 10.0;
  /// The check fails if more than this fraction is excluded at any epsilon.
  double max_excluded_fraction = 0.05;
  double control_bound = 100.0;
  /// Parallel width for ensemble members; 0 picks hardware concurrency.
  unsigned threads = 0;
};

/// Monte Carlo estimate of E[sup_t ||Y - y||_{H^1}^2 + int ||Y - y||_{H^3}^2 dt]
/// between controlled trajectories Y and the skeleton y = u^phi per epsilon.
ConvergenceReport check_condition2(const Control& phi, const std::vector<double>& epsilons,
                                   const VectorField& u0, const NoiseCoefficients& nc,
                                   const LevyMeasure& nu, const SolverConfig& config,
                                   const Condition2Options& options = {});

/// Strictly decreasing sequence test.
bool strictly_decreasing(const std::vector<double>& values);

}  // namespace sllbar
