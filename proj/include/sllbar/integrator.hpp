#pragma once

// Jump-adapted time stepping shared by the base, scaled, controlled and
// skeleton equations.
//
// Between jumps the state follows du/dt = F(u) + extra(t, u). The compensator
// pieces of the jump equations collapse to extra = -m_1 J(u) with
// m_1 = sum_j w_j l_j, since b(u) - sum_j w_j G(l_j, u) = -m_1 J(u) and the
// control-dependent terms cancel. Jumps are applied at event times as
// u <- u + eps G(l, u). Steps are shortened so that every event, control
// breakpoint and record time is hit exactly.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sllbar/control.hpp"
#include "sllbar/field.hpp"
#include "sllbar/marcus.hpp"
#include "sllbar/noise.hpp"

namespace sllbar {

enum class Scheme { etd_rk2, imex_euler };

/// as_written: u + eps (Phi(l, u) - u).  rescaled_mark: Phi(eps l, u).
enum class JumpConvention { as_written, rescaled_mark };

enum class RunStatus { completed, blowup, nonfinite };

std::string to_string(RunStatus status);
std::string to_string(Scheme scheme);

struct SolverConfig {
  double dt = 1e-3;
  double horizon = 1.0;
  Scheme scheme = Scheme::etd_rk2;
  /// Runs stop with RunStatus::blowup once ||u||_{H^1} exceeds this.
  double blowup_cap = 1e6;
  /// Snapshots are taken every record_every base steps (and at the horizon).
  std::size_t record_every = 1;
  /// When false only the norms of each snapshot are kept.
  bool keep_fields = true;
  /// Test hook: zero the continuous drift entirely.
  bool enable_drift = true;
  JumpConvention jump_convention = JumpConvention::as_written;
  FlowMethod flow_method = FlowMethod::closed_form;

  void validate() const;
};

struct JumpRecord {
  double t;
  double mark;
  std::size_t atom;
  double pre_h1;
  double post_h1;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<VectorField> states;  // empty unless keep_fields
  std::vector<double> h1_sq;
  std::vector<double> h3_sq;
  std::vector<JumpRecord> jumps;
  RunStatus status = RunStatus::completed;

  std::size_t size() const { return times.size(); }
  double sup_h1_sq() const;
  /// Trapezoid rule over the snapshot times.
  double integral_h3_sq() const;
};

/// Continuous forcing added to F. Receives the midpoint time of the step.
using ExtraDrift = std::function<VectorField(double, const VectorField&)>;

/// One step of the drift flow du/dt = F(u) + extra(t_mid, u).
/// ETD-RK2 integrates the diagonal part l_k exactly.
VectorField step_drift(const VectorField& u, double dt, const ExtraDrift& extra = {},
                       Scheme scheme = Scheme::etd_rk2, double t_mid = 0.0);

/// Base (eps = 1) and scaled equations driven by a pre-sampled path.
Trajectory integrate_sde(const VectorField& u0, const NoiseCoefficients& nc,
                         const LevyMeasure& nu, double epsilon, const JumpPath& path,
                         const SolverConfig& config);

/// Controlled equation: samples the thinned PRM and integrates along it.
Trajectory integrate_controlled(const VectorField& u0, const NoiseCoefficients& nc,
                                const LevyMeasure& nu, double epsilon, const Control& phi,
                                std::uint64_t seed, const SolverConfig& config,
                                double control_bound = 100.0);

/// Skeleton equation du/dt = F(u) + b(u) + sum_j w_j G(l_j, u) (theta_j(t) - 1).
Trajectory integrate_skeleton(const VectorField& u0, const NoiseCoefficients& nc,
                              const LevyMeasure& nu, const Control& theta,
                              const SolverConfig& config);

/// Deterministic flow du/dt = F(u) + extra(t, u) with optional cut times.
Trajectory integrate_deterministic(const VectorField& u0, const SolverConfig& config,
                                   const ExtraDrift& extra = {},
                                   std::span<const double> cut_times = {});

}  // namespace sllbar
