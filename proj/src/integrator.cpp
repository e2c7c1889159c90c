#include "sllbar/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sllbar {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup: return "blowup";
    case RunStatus::nonfinite: return "nonfinite";
  }
  return "unknown";
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::etd_rk2 ? "etd_rk2" : "imex_euler";
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("SolverConfig: dt must be positive");
  if (!(horizon >= dt)) throw std::invalid_argument("SolverConfig: horizon must be >= dt");
  if (!(blowup_cap > 0.0)) throw std::invalid_argument("SolverConfig: blowup_cap must be positive");
  if (record_every == 0) throw std::invalid_argument("SolverConfig: record_every must be >= 1");
}

double Trajectory::sup_h1_sq() const {
  double best = 0.0;
  for (double v : h1_sq) best = std::max(best, v);
  return best;
}

double Trajectory::integral_h3_sq() const {
  double total = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    total += 0.5 * (times[i] - times[i - 1]) * (h3_sq[i] + h3_sq[i - 1]);
  }
  return total;
}

namespace {

// phi_1(z) = (e^z - 1)/z, phi_2(z) = (e^z - 1 - z)/z^2
double phi1(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

double phi2(double z) {
  if (std::abs(z) < 1e-2) {
    return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)));
  }
  return (std::expm1(z) - z) / (z * z);
}

VectorField total_nonlinear(const VectorField& u, const ExtraDrift& extra, double t_mid) {
  VectorField out = nonlinear_remainder(u);
  if (extra) out += extra(t_mid, u);
  return out;
}

}  // namespace

VectorField step_drift(const VectorField& u, double dt, const ExtraDrift& extra, Scheme scheme,
                       double t_mid) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_drift: dt must be positive");
  const auto ell = linear_multiplier(u.basis());
  const std::size_t n = u.modes();

  if (scheme == Scheme::imex_euler) {
    VectorField out = u;
    out.add_scaled(dt, total_nonlinear(u, extra, t_mid));
    for (int c = 0; c < 3; ++c) {
      for (std::size_t k = 0; k < n; ++k) out(c, k) /= (1.0 - dt * ell[k]);
    }
    return out;
  }

  std::vector<double> e(n), p1(n), p2(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = ell[k] * dt;
    e[k] = std::exp(z);
    p1[k] = dt * phi1(z);
    p2[k] = dt * phi2(z);
  }

  const VectorField nu = total_nonlinear(u, extra, t_mid);
  VectorField a(u.basis_ptr());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < n; ++k) a(c, k) = e[k] * u(c, k) + p1[k] * nu(c, k);
  }
  const VectorField na = total_nonlinear(a, extra, t_mid);
  VectorField out = a;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < n; ++k) out(c, k) += p2[k] * (na(c, k) - nu(c, k));
  }
  return out;
}

namespace {

using JumpApplier = std::function<VectorField(const JumpEvent&, const VectorField&)>;
using MarkLookup = std::function<double(std::size_t)>;

class Recorder {
 public:
  Recorder(Trajectory& traj, bool keep_fields) : traj_(traj), keep_fields_(keep_fields) {}

  void record(double t, const VectorField& u) {
    traj_.times.push_back(t);
    traj_.h1_sq.push_back(sobolev_norm_sq(u, 1));
    traj_.h3_sq.push_back(sobolev_norm_sq(u, 3));
    if (keep_fields_) traj_.states.push_back(u);
  }

 private:
  Trajectory& traj_;
  bool keep_fields_;
};

// Returns true when the state is acceptable; otherwise sets the status.
bool check_state(const VectorField& u, const SolverConfig& cfg, Trajectory& traj) {
  if (!u.is_finite()) {
    traj.status = RunStatus::nonfinite;
    return false;
  }
  if (std::sqrt(sobolev_norm_sq(u, 1)) > cfg.blowup_cap) {
    traj.status = RunStatus::blowup;
    return false;
  }
  return true;
}

Trajectory run_kernel(const VectorField& u0, const SolverConfig& cfg, const ExtraDrift& extra,
                      std::span<const double> cut_times, std::span<const JumpEvent> events,
                      const JumpApplier& apply_jump, const MarkLookup& mark_of) {
  cfg.validate();
  const double horizon = cfg.horizon;
  const double stride = static_cast<double>(cfg.record_every) * cfg.dt;
  const double tol = 1e-12 * horizon;

  std::vector<double> cuts;
  for (double c : cut_times) {
    if (c > tol && c < horizon - tol) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());

  Trajectory traj;
  Recorder recorder(traj, cfg.keep_fields);
  VectorField u = u0;
  recorder.record(0.0, u);
  if (!check_state(u, cfg, traj)) return traj;

  std::size_t record_index = 1;
  auto next_record = [&]() {
    const double r = static_cast<double>(record_index) * stride;
    return r > horizon - tol ? horizon : r;
  };
  std::size_t event_index = 0;
  std::size_t cut_index = 0;
  double t = 0.0;

  while (t < horizon) {
    double target = next_record();
    if (event_index < events.size()) target = std::min(target, events[event_index].t);
    if (cut_index < cuts.size()) target = std::min(target, cuts[cut_index]);

    const double span = target - t;
    if (span > 0.0) {
      const auto substeps =
          std::max<long long>(1, static_cast<long long>(std::ceil(span / cfg.dt - 1e-9)));
      const double h = span / static_cast<double>(substeps);
      for (long long i = 0; i < substeps; ++i) {
        const double t_start = t + static_cast<double>(i) * h;
        if (cfg.enable_drift) u = step_drift(u, h, extra, cfg.scheme, t_start + 0.5 * h);
        if (!check_state(u, cfg, traj)) {
          recorder.record(t_start + h, u);
          return traj;
        }
      }
    }
    t = target;

    while (event_index < events.size() && events[event_index].t <= t) {
      const JumpEvent& ev = events[event_index++];
      const double pre = std::sqrt(sobolev_norm_sq(u, 1));
      u = apply_jump(ev, u);
      const double post = std::sqrt(sobolev_norm_sq(u, 1));
      traj.jumps.push_back({ev.t, mark_of(ev.atom), ev.atom, pre, post});
      if (!check_state(u, cfg, traj)) {
        recorder.record(t, u);
        return traj;
      }
    }
    while (cut_index < cuts.size() && cuts[cut_index] <= t) ++cut_index;
    if (t >= next_record()) {
      recorder.record(t, u);
      ++record_index;
    }
  }
  return traj;
}

ExtraDrift compensator_drift(const NoiseCoefficients& nc, const LevyMeasure& nu) {
  const double m1 = nu.first_moment();
  if (m1 == 0.0) return {};
  return [&nc, m1](double, const VectorField& u) {
    VectorField j = jump_field(u, nc);
    j *= -m1;
    return j;
  };
}

JumpApplier jump_applier(const NoiseCoefficients& nc, const LevyMeasure& nu, double epsilon,
                         const SolverConfig& cfg) {
  return [&nc, &nu, epsilon, &cfg](const JumpEvent& ev, const VectorField& u) {
    const double mark = nu.atoms()[ev.atom].mark;
    if (cfg.jump_convention == JumpConvention::rescaled_mark) {
      return marcus_flow(epsilon * mark, u, nc, cfg.flow_method);
    }
    if (epsilon == 1.0) return marcus_flow(mark, u, nc, cfg.flow_method);
    VectorField out = u;
    out.add_scaled(epsilon, jump_increment_G(mark, u, nc, cfg.flow_method));
    return out;
  };
}

void validate_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    throw std::invalid_argument("epsilon must lie in (0, 1]; use integrate_skeleton for the limit");
  }
}

void require_basis(const VectorField& u0, const NoiseCoefficients& nc) {
  require_same_basis(u0, nc.h);
}

}  // namespace

Trajectory integrate_deterministic(const VectorField& u0, const SolverConfig& config,
                                   const ExtraDrift& extra, std::span<const double> cut_times) {
  return run_kernel(u0, config, extra, cut_times, {}, {}, {});
}

Trajectory integrate_sde(const VectorField& u0, const NoiseCoefficients& nc,
                         const LevyMeasure& nu, double epsilon, const JumpPath& path,
                         const SolverConfig& config) {
  validate_epsilon(epsilon);
  require_basis(u0, nc);
  if (path.epsilon != epsilon) {
    throw std::invalid_argument("integrate_sde: path sampled at a different epsilon");
  }
  if (std::abs(path.horizon - config.horizon) > 1e-12 * config.horizon) {
    throw std::invalid_argument("integrate_sde: path horizon differs from solver horizon");
  }
  for (std::size_t i = 0; i < path.events.size(); ++i) {
    const auto& ev = path.events[i];
    if (ev.atom >= nu.size()) throw std::invalid_argument("integrate_sde: event atom out of range");
    if (!(ev.t > 0.0) || ev.t > path.horizon) {
      throw std::invalid_argument("integrate_sde: event time outside (0, T]");
    }
    if (i > 0 && ev.t < path.events[i - 1].t) {
      throw std::invalid_argument("integrate_sde: events not time-sorted");
    }
  }
  return run_kernel(u0, config, compensator_drift(nc, nu), {}, path.events,
                    jump_applier(nc, nu, epsilon, config),
                    [&nu](std::size_t j) { return nu.atoms()[j].mark; });
}

Trajectory integrate_controlled(const VectorField& u0, const NoiseCoefficients& nc,
                                const LevyMeasure& nu, double epsilon, const Control& phi,
                                std::uint64_t seed, const SolverConfig& config,
                                double control_bound) {
  validate_epsilon(epsilon);
  const JumpPath path =
      sample_controlled_prm(nu, phi, config.horizon, epsilon, seed, control_bound);
  return integrate_sde(u0, nc, nu, epsilon, path, config);
}

Trajectory integrate_skeleton(const VectorField& u0, const NoiseCoefficients& nc,
                              const LevyMeasure& nu, const Control& theta,
                              const SolverConfig& config) {
  require_basis(u0, nc);
  if (theta.atoms() != nu.size()) {
    throw std::invalid_argument("integrate_skeleton: control channels != atoms");
  }
  if (std::abs(theta.horizon() - config.horizon) > 1e-12 * config.horizon) {
    throw std::invalid_argument("integrate_skeleton: control horizon mismatch");
  }
  ExtraDrift extra;
  if (!nu.empty()) {
    extra = [&nc, &nu, &theta, &config](double t, const VectorField& u) {
      const VectorField j = jump_field(u, nc);
      VectorField acc(u.basis_ptr());
      for (std::size_t a = 0; a < nu.size(); ++a) {
        const auto& atom = nu.atoms()[a];
        VectorField g = marcus_flow(atom.mark, u, nc, config.flow_method) - u;
        // b contribution w (G - l J) plus control tilt w G (theta - 1).
        acc.add_scaled(atom.weight * theta(t, a), g);
        acc.add_scaled(-atom.weight * atom.mark, j);
      }
      return acc;
    };
  }
  return run_kernel(u0, config, extra, theta.breakpoints(), {}, {}, {});
}

}  // namespace sllbar
