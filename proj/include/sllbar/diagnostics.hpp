#pragma once

// Energy functionals and runtime monitors for computed trajectories.
//
//   Fbar(u) = 1/2 ||grad u||^2 + 1/2 ||u||_{L^4}^4 - ||u||^2
//
// Along the noise-free Galerkin flow dFbar/dt = -(||H_eff||^2 + ||grad H_eff||^2).
// L^4 and L^inf quantities are evaluated on the collocation grid, where the
// midpoint rule is exact for the quartic of an N-mode field (M >= 2N).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sllbar/field.hpp"
#include "sllbar/integrator.hpp"
#include "sllbar/marcus.hpp"

namespace sllbar {

struct EnergyRecord {
  double t = 0.0;
  double l2_sq = 0.0;
  double h1_sq = 0.0;
  double lap_sq = 0.0;
  double l4_4 = 0.0;
  double fbar = 0.0;
  double heff_h1_sq = 0.0;
  bool finite = true;
};

EnergyRecord energy_record(double t, const VectorField& u);

/// 1/2 ||grad u||^2 + 1/2 ||u||_{L^4}^4 - ||u||^2
double energy_fbar(const VectorField& u);

/// ||H_eff||^2_{L^2} + ||grad H_eff||^2_{L^2}
double dissipation_rate(const VectorField& u);

struct EnergyAuditOptions {
  /// Enables the monotonicity verdict (meaningful only without noise).
  bool no_noise = true;
  /// Per-step allowance: Fbar(t_{i+1}) <= Fbar(t_i) + tol (1 + |Fbar(t_i)|).
  double relative_tolerance = 1e-8;
};

struct EnergyAudit {
  std::vector<EnergyRecord> records;
  bool monotonicity_checked = false;
  bool fbar_nonincreasing = true;
  /// Largest per-step increase of Fbar, normalised by (1 + |Fbar|).
  double worst_increase = 0.0;
  double h3_integral = 0.0;
  bool h3_integral_finite = true;
  bool all_finite = true;
  double relative_tolerance = 0.0;
  std::size_t grid_points = 0;
  bool passed = false;
  std::string verdict;
};

EnergyAudit energy_audit(const Trajectory& traj, const EnergyAuditOptions& options = {});

struct MomentGroup {
  std::size_t modes = 0;
  std::size_t count = 0;
  double sup_h1_moment = 0.0;  // E sup_t ||u||_{H^1}^{2p}
  double h3_moment = 0.0;      // E (int ||u||_{H^3}^2 dt)^p
};

struct MomentReport {
  int p = 1;
  double tolerance = 0.2;
  std::vector<MomentGroup> groups;  // sorted by mode count
  double max_relative_variation = 0.0;
  bool passed = false;
  std::string verdict;
};

/// Monte Carlo moments grouped by mode count; modes[i] labels ensemble[i].
MomentReport moment_bounds(std::span<const Trajectory> ensemble,
                           std::span<const std::size_t> modes, int p,
                           double tolerance = 0.2);

/// ||u||_{L^inf} / (||u||_{H^1}^{1/2} ||u||_{H^2}^{1/2}) with the sup taken on the grid.
double gn_check(const VectorField& u);

/// H^1 distance between Pi_n Phi(l, Pi_n u) and the flow of Pi_n J started at Pi_n u.
double projection_discrepancy(double l, const VectorField& u, const NoiseCoefficients& nc,
                              std::size_t n, int rk4_steps = kDefaultRk4Steps);

/// Relative residual of the time-integrated weak form tested against e_k in
/// every component, for a noise-free trajectory recorded with fields. Spatial
/// inner products use a dense midpoint quadrature with analytic derivatives.
double weak_form_residual(const Trajectory& traj, std::size_t k,
                          std::size_t quadrature_points = 0);

}  // namespace sllbar
