#include "sllbar/app/experiments.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sllbar/app/csv.hpp"
#include "sllbar/diagnostics.hpp"
#include "sllbar/integrator.hpp"
#include "sllbar/ldp.hpp"
#include "sllbar/marcus.hpp"

namespace sllbar::app {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

namespace {

// Collects artifacts in memory and writes them, the verdict and the manifest
// from a single thread at the end of a run.
class Artifacts {
 public:
  Artifacts(const ExperimentConfig& cfg, std::string command)
      : cfg_(cfg), command_(std::move(command)) {}

  void add(const std::string& name, std::string content) {
    files_.emplace_back(name, std::move(content));
  }

  RunResult finish(int exit_code, const std::string& status, const std::string& verdict) {
    RunResult result;
    result.exit_code = exit_code;
    result.status = status;
    result.verdict = verdict;
    add("verdict.txt", verdict + "\n");

    std::ostringstream manifest;
    manifest << "version: " << kVersion << "\n"
             << "command: " << command_ << "\n"
             << "seed: " << cfg_.seed << "\n"
             << "status: " << status << "\n"
             << "exit_code: " << exit_code << "\n"
             << "[config]\n"
             << cfg_.raw.echo() << "[outputs]\n";
    for (const auto& [name, content] : files_) {
      const auto path = cfg_.output_dir / name;
      write_text(path, content);
      result.outputs.push_back(path);
      manifest << name << " sha256=" << sha256_hex(content) << "\n";
    }
    const auto manifest_path = cfg_.output_dir / "manifest.txt";
    write_text(manifest_path, manifest.str());
    result.outputs.push_back(manifest_path);
    return result;
  }

 private:
  const ExperimentConfig& cfg_;
  std::string command_;
  std::vector<std::pair<std::string, std::string>> files_;
};

struct Setup {
  BasisPtr basis;
  VectorField u0;
  NoiseCoefficients nc;
};

Setup make_setup(const ExperimentConfig& cfg) {
  BasisPtr basis = cfg.basis();
  VectorField u0 = cfg.initial.build(basis);
  NoiseCoefficients nc(cfg.h.build(basis), cfg.g.build(basis));
  return {basis, std::move(u0), std::move(nc)};
}

std::optional<Control> load_control(const ExperimentConfig& cfg) {
  if (!cfg.control_file) return std::nullopt;
  return read_control_csv(*cfg.control_file, cfg.nu.size(), cfg.solver.horizon);
}

int status_exit(RunStatus s) { return s == RunStatus::completed ? kExitOk : kExitBlowup; }

void add_trajectory(Artifacts& out, const Trajectory& traj) {
  out.add("trajectory.csv", trajectory_csv(traj));
  out.add("jumps.csv", jump_log_csv(traj));
  if (!traj.states.empty()) {
    std::vector<EnergyRecord> records;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      records.push_back(energy_record(traj.times[i], traj.states[i]));
    }
    out.add("energy.csv", energy_csv(records));
  }
}

std::string run_verdict(const std::string& name, const Trajectory& traj) {
  std::ostringstream v;
  v << name << ": " << to_string(traj.status) << " at t = " << traj.times.back() << ", "
    << traj.jumps.size() << " jumps, sup ||u||_H1^2 = " << traj.sup_h1_sq();
  return v.str();
}

std::vector<Control> sin2_sequence(const std::vector<double>& ns, std::size_t atoms, double T,
                                   std::size_t pieces) {
  std::vector<Control> out;
  for (double n : ns) {
    out.push_back(Control::from_function(T, atoms, pieces, [n, T](double t, std::size_t) {
      const double s = std::sin(std::numbers::pi * t / T);
      return 1.0 + (1.0 - 1.0 / n) * s * s;
    }));
  }
  return out;
}

VectorField random_low_mode(const BasisPtr& basis, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> amp(-scale, scale);
  VectorField u(basis);
  const std::size_t top = std::min<std::size_t>(basis->modes(), 4);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < top; ++k) u(c, k) = amp(rng) / static_cast<double>(1 + k);
  }
  return u;
}

double max_grid_error(const VectorField& a, const VectorField& b) {
  const auto ga = a.grid_values();
  const auto gb = b.grid_values();
  double worst = 0.0;
  for (std::size_t i = 0; i < ga.size(); ++i) worst = std::max(worst, std::abs(ga[i] - gb[i]));
  return worst;
}

}  // namespace

RunResult run_simulate(const ExperimentConfig& cfg) {
  const Setup s = make_setup(cfg);
  const auto control = load_control(cfg);
  JumpPath path;
  const std::string replay = cfg.raw.get_string("path.file", "");
  if (!replay.empty()) {
    path = read_jump_path_csv(replay, cfg.nu, cfg.solver.horizon, cfg.epsilon);
  } else if (control) {
    path = sample_controlled_prm(cfg.nu, *control, cfg.solver.horizon, cfg.epsilon, cfg.seed,
                                 cfg.control_bound);
  } else {
    path = sample_prm(cfg.nu, cfg.solver.horizon, cfg.epsilon, cfg.seed);
  }
  const Trajectory traj = integrate_sde(s.u0, s.nc, cfg.nu, cfg.epsilon, path, cfg.solver);

  Artifacts out(cfg, "simulate");
  add_trajectory(out, traj);
  out.add("path.csv", jump_path_csv(path, cfg.nu));
  return out.finish(status_exit(traj.status), to_string(traj.status),
                    run_verdict("simulate", traj));
}

RunResult run_skeleton(const ExperimentConfig& cfg) {
  const Setup s = make_setup(cfg);
  const auto control = load_control(cfg);
  const Control theta =
      control ? *control : Control::constant(cfg.solver.horizon, cfg.nu.size(), 1.0);
  const Trajectory traj = integrate_skeleton(s.u0, s.nc, cfg.nu, theta, cfg.solver);

  Artifacts out(cfg, "skeleton");
  add_trajectory(out, traj);
  out.add("control.csv", control_csv(theta));
  std::ostringstream v;
  v << run_verdict("skeleton", traj) << ", rate cost " << rate_cost(theta, cfg.nu);
  return out.finish(status_exit(traj.status), to_string(traj.status), v.str());
}

RunResult run_condition1(const ExperimentConfig& cfg) {
  const Setup s = make_setup(cfg);
  const auto& raw = cfg.raw;
  const double T = cfg.solver.horizon;
  std::vector<Control> sequence;
  std::optional<Control> limit;
  std::vector<double> labels;

  const std::string preset = raw.get_string("condition1.preset", "");
  if (preset == "sin2") {
    labels = raw.get_double_list("condition1.n_list");
    if (labels.empty()) labels = {2, 4, 8, 16};
    const std::size_t pieces = raw.get_size("condition1.pieces", 20);
    if (pieces == 0) throw ConfigError("config: condition1.pieces must be >= 1");
    sequence = sin2_sequence(labels, cfg.nu.size(), T, pieces);
    limit = Control::from_function(T, cfg.nu.size(), pieces, [T](double t, std::size_t) {
      const double v = std::sin(std::numbers::pi * t / T);
      return 1.0 + v * v;
    });
  } else if (preset.empty()) {
    const auto files = raw.get_string_list("condition1.sequence");
    if (files.empty()) {
      throw ConfigError("config: condition1 needs condition1.preset or condition1.sequence files");
    }
    for (const auto& f : files) {
      if (!std::filesystem::exists(f)) throw ConfigError("config: control file not found: " + f);
      sequence.push_back(read_control_csv(f, cfg.nu.size(), T));
    }
    const std::string limit_file = raw.require_string("condition1.limit");
    if (!std::filesystem::exists(limit_file)) {
      throw ConfigError("config: control file not found: " + limit_file);
    }
    limit = read_control_csv(limit_file, cfg.nu.size(), T);
    labels = raw.get_double_list("condition1.n_list");
  } else {
    throw ConfigError("config: unknown condition1.preset '" + preset + "'");
  }

  Condition1Options options;
  options.cost_bound = raw.get_double("condition1.cost_bound", options.cost_bound);
  options.threshold = raw.get_double("condition1.threshold", options.threshold);
  const ConvergenceReport report =
      check_condition1(sequence, *limit, s.u0, s.nc, cfg.nu, cfg.solver, options, labels);

  Artifacts out(cfg, "condition1");
  out.add("condition1.csv", condition1_csv(report));
  out.add("limit_control.csv", control_csv(*limit));
  return out.finish(kExitOk, report.passed ? "pass" : "fail", report.verdict);
}

RunResult run_condition2(const ExperimentConfig& cfg) {
  const Setup s = make_setup(cfg);
  if (!cfg.control_file) throw ConfigError("config: condition2 requires control.file");
  if (cfg.epsilon_list.empty()) throw ConfigError("config: condition2 requires scale.epsilon_list");
  const Control phi = *load_control(cfg);

  Condition2Options options;
  options.ensemble = cfg.ensemble;
  options.master_seed = cfg.seed;
  options.control_bound = cfg.control_bound;
  options.threads = cfg.threads;
  options.exclusion_factor =
      cfg.raw.get_double("condition2.exclusion_factor", options.exclusion_factor);
  options.max_excluded_fraction =
      cfg.raw.get_double("condition2.max_excluded_fraction", options.max_excluded_fraction);
  const ConvergenceReport report =
      check_condition2(phi, cfg.epsilon_list, s.u0, s.nc, cfg.nu, cfg.solver, options);

  Artifacts out(cfg, "condition2");
  out.add("condition2.csv", condition2_csv(report));
  return out.finish(kExitOk, report.passed ? "pass" : "fail", report.verdict);
}

RunResult run_energy_audit(const ExperimentConfig& cfg) {
  const Setup s = make_setup(cfg);
  SolverConfig solver = cfg.solver;
  solver.keep_fields = true;
  const JumpPath path = sample_prm(cfg.nu, solver.horizon, cfg.epsilon, cfg.seed);
  const Trajectory traj = integrate_sde(s.u0, s.nc, cfg.nu, cfg.epsilon, path, solver);

  EnergyAuditOptions options;
  options.no_noise = cfg.nu.empty();
  options.relative_tolerance = cfg.raw.get_double("audit.tolerance", options.relative_tolerance);
  const EnergyAudit audit = energy_audit(traj, options);

  Artifacts out(cfg, "energy-audit");
  out.add("energy.csv", energy_csv(audit.records));
  out.add("trajectory.csv", trajectory_csv(traj));
  out.add("jumps.csv", jump_log_csv(traj));
  std::string verdict = audit.verdict;
  if (traj.status != RunStatus::completed) verdict += "\n  run status: " + to_string(traj.status);
  const std::string status = traj.status != RunStatus::completed ? to_string(traj.status)
                             : audit.passed                      ? "pass"
                                                                 : "fail";
  return out.finish(status_exit(traj.status), status, verdict);
}

RunResult run_flow_check(const ExperimentConfig& cfg) {
  const BasisPtr basis = cfg.basis();
  const std::string preset = cfg.raw.get_string("flow_check.preset", "rodrigues");
  const double tolerance = cfg.raw.get_double("flow_check.tolerance", 1e-8);
  const int steps = static_cast<int>(cfg.raw.get_size("flow_check.rk4_steps", kDefaultRk4Steps));

  std::ostringstream table;
  table << "case,mark,closed_vs_rk4,closed_vs_exact\n";
  double worst = 0.0;
  double worst_exact = 0.0;
  std::size_t cases = 0;

  if (preset == "rodrigues") {
    const double l = 0.5;
    const NoiseCoefficients nc(VectorField::constant(basis, {0, 0, 1}), VectorField(basis));
    const VectorField u = VectorField::constant(basis, {1, 0, 0});
    const VectorField closed = marcus_flow(l, u, nc, FlowMethod::closed_form);
    const VectorField rk4 = marcus_flow(l, u, nc, FlowMethod::rk4, steps);
    const VectorField exact = VectorField::constant(basis, {std::cos(l), -std::sin(l), 0.0});
    worst = max_grid_error(closed, rk4);
    worst_exact = max_grid_error(closed, exact);
    cases = 1;
    table << "0," << format_double(l) << "," << format_double(worst) << ","
          << format_double(worst_exact) << "\n";
  } else if (preset == "random") {
    const std::size_t samples = cfg.raw.get_size("flow_check.samples", 50);
    std::mt19937_64 rng(stream_seed(cfg.seed, 0x666c6f77));
    std::uniform_real_distribution<double> mark(-1.0, 1.0);
    for (std::size_t i = 0; i < samples; ++i) {
      const double l = mark(rng);
      const VectorField h = random_low_mode(basis, rng, 1.0);
      const VectorField g = random_low_mode(basis, rng, 1.0);
      const VectorField u = random_low_mode(basis, rng, 1.0);
      const NoiseCoefficients nc(h, g);
      const double err = max_grid_error(marcus_flow(l, u, nc, FlowMethod::closed_form),
                                        marcus_flow(l, u, nc, FlowMethod::rk4, steps));
      worst = std::max(worst, err);
      table << i << "," << format_double(l) << "," << format_double(err) << ",\n";
    }
    cases = samples;
  } else {
    throw ConfigError("config: unknown flow_check.preset '" + preset + "'");
  }

  const bool passed = worst < tolerance && worst_exact < tolerance;
  std::ostringstream v;
  v << "flow check (" << preset << "): " << (passed ? "PASS" : "FAIL") << ", " << cases
    << " cases, max closed_form/rk4 grid error " << worst;
  if (preset == "rodrigues") v << ", max error vs (cos 0.5, -sin 0.5, 0) " << worst_exact;
  v << ", tolerance " << tolerance << ", rk4 steps " << steps;

  Artifacts out(cfg, "flow-check");
  out.add("flow_check.csv", table.str());
  return out.finish(kExitOk, passed ? "pass" : "fail", v.str());
}

RunResult run_command(const std::string& command, const ExperimentConfig& cfg) {
  if (command == "simulate") return run_simulate(cfg);
  if (command == "skeleton") return run_skeleton(cfg);
  if (command == "condition1") return run_condition1(cfg);
  if (command == "condition2") return run_condition2(cfg);
  if (command == "energy-audit") return run_energy_audit(cfg);
  if (command == "flow-check") return run_flow_check(cfg);
  throw ConfigError("unknown command '" + command + "'");
}

int execute(const std::string& command, const std::filesystem::path& config_path,
            const std::vector<std::pair<std::string, std::string>>& overrides,
            std::string* error) {
  auto fail = [error](int code, const std::string& category, const std::string& what) {
    if (error) *error = "error[" + category + "]: " + what;
    return code;
  };
  try {
    KeyValueConfig raw =
        config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(config_path);
    for (const auto& [k, v] : overrides) raw.set(k, v);
    const ExperimentConfig cfg = ExperimentConfig::from(raw);
    const RunResult result = run_command(command, cfg);
    if (error) *error = result.verdict;
    if (result.exit_code == kExitBlowup) {
      return fail(kExitBlowup, "blowup", result.verdict);
    }
    return result.exit_code;
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config", e.what());
  } catch (const IoError& e) {
    return fail(kExitIo, "io", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kExitIo, "io", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kExitConfig, "config", e.what());
  } catch (const std::domain_error& e) {
    return fail(kExitBlowup, "blowup", e.what());
  } catch (const std::runtime_error& e) {
    return fail(kExitBlowup, "blowup", e.what());
  } catch (const std::exception& e) {
    return fail(kExitConfig, "config", e.what());
  }
}

}  // namespace sllbar::app
