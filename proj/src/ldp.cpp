#include "sllbar/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sllbar/ensemble.hpp"

namespace sllbar {

double entropy_integrand(double x) {
  if (x < 0.0 || !std::isfinite(x)) {
    throw std::invalid_argument("rate cost: control values must be finite and nonnegative");
  }
  if (x == 0.0) return 1.0;
  return x * std::log(x) - x + 1.0;
}

double rate_cost(const Control& theta, const LevyMeasure& nu) {
  if (theta.atoms() != nu.size()) {
    throw std::invalid_argument("rate_cost: control channels != atoms");
  }
  double total = 0.0;
  const auto breaks = theta.breakpoints();
  for (std::size_t j = 0; j < nu.size(); ++j) {
    double per_atom = 0.0;
    for (std::size_t i = 0; i < theta.pieces(); ++i) {
      per_atom += (breaks[i + 1] - breaks[i]) * entropy_integrand(theta.value(i, j));
    }
    total += nu.atoms()[j].weight * per_atom;
  }
  return total;
}

namespace {

void require_fields(const Trajectory& t) {
  if (t.states.size() != t.times.size()) {
    throw std::invalid_argument("z_distance: trajectory was recorded without fields");
  }
}

PathDistance distance_from(const std::vector<double>& times,
                           const std::vector<double>& h1_sq,
                           const std::vector<double>& h3_sq) {
  PathDistance d;
  double sup_sq = 0.0;
  double integral = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    sup_sq = std::max(sup_sq, h1_sq[i]);
    if (i > 0) integral += 0.5 * (times[i] - times[i - 1]) * (h3_sq[i] + h3_sq[i - 1]);
  }
  d.sup_h1 = std::sqrt(sup_sq);
  d.l2_h3 = std::sqrt(integral);
  return d;
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

PathDistance z_distance(const Trajectory& a, const Trajectory& b) {
  require_fields(a);
  require_fields(b);
  if (a.times.size() != b.times.size()) {
    throw std::invalid_argument("z_distance: trajectories have different snapshot counts");
  }
  std::vector<double> h1(a.size()), h3(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-9 * std::max(1.0, std::abs(a.times[i]))) {
      throw std::invalid_argument("z_distance: snapshot times differ");
    }
    const VectorField diff = a.states[i] - b.states[i];
    h1[i] = sobolev_norm_sq(diff, 1);
    h3[i] = sobolev_norm_sq(diff, 3);
  }
  return distance_from(a.times, h1, h3);
}

PathDistance z_norm(const Trajectory& a) { return distance_from(a.times, a.h1_sq, a.h3_sq); }

bool strictly_decreasing(const std::vector<double>& values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1])) return false;
  }
  return true;
}

ConvergenceReport check_condition1(const std::vector<Control>& sequence, const Control& limit,
                                   const VectorField& u0, const NoiseCoefficients& nc,
                                   const LevyMeasure& nu, const SolverConfig& config,
                                   const Condition1Options& options,
                                   const std::vector<double>& labels) {
  if (sequence.empty()) throw std::invalid_argument("check_condition1: empty control sequence");
  if (!labels.empty() && labels.size() != sequence.size()) {
    throw std::invalid_argument("check_condition1: labels must match the sequence length");
  }
  std::vector<double> costs;
  for (const auto& theta : sequence) costs.push_back(rate_cost(theta, nu));
  const double limit_cost = rate_cost(limit, nu);
  for (double c : costs) {
    if (c > options.cost_bound) {
      throw std::invalid_argument("check_condition1: control outside S^K (rate cost exceeds bound)");
    }
  }
  if (limit_cost > options.cost_bound) {
    throw std::invalid_argument("check_condition1: limit control outside S^K");
  }

  SolverConfig cfg = config;
  cfg.keep_fields = true;
  const Trajectory reference = integrate_skeleton(u0, nc, nu, limit, cfg);
  if (reference.status != RunStatus::completed) {
    throw std::runtime_error("check_condition1: limit skeleton " + to_string(reference.status));
  }

  ConvergenceReport report;
  report.threshold = options.threshold;
  std::vector<double> metrics;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const Trajectory traj = integrate_skeleton(u0, nc, nu, sequence[i], cfg);
    if (traj.status != RunStatus::completed) {
      throw std::runtime_error("check_condition1: skeleton case " + std::to_string(i) + " " +
                               to_string(traj.status));
    }
    const PathDistance d = z_distance(traj, reference);
    ConvergenceCase row;
    row.parameter = labels.empty() ? static_cast<double>(i + 1) : labels[i];
    row.sup_h1 = d.sup_h1;
    row.l2_h3 = d.l2_h3;
    row.metric = d.metric();
    row.cost = costs[i];
    row.samples = 1;
    report.cases.push_back(row);
    metrics.push_back(row.metric);
  }
  report.monotone = strictly_decreasing(metrics) || all_zero(metrics);
  report.below_threshold = metrics.back() < options.threshold;
  report.passed = report.monotone && report.below_threshold;

  std::ostringstream out;
  out << "condition1: " << (report.passed ? "PASS" : "FAIL")
      << " (distances " << (report.monotone ? "decreasing" : "not decreasing")
      << ", final distance " << metrics.back() << " vs threshold " << options.threshold
      << ", cost bound K = " << options.cost_bound << ", limit cost " << limit_cost << ")";
  report.verdict = out.str();
  return report;
}

namespace {

struct MemberResult {
  bool excluded = false;
  double value = 0.0;
  double sup_h1 = 0.0;
  double l2_h3 = 0.0;
};

}  // namespace

ConvergenceReport check_condition2(const Control& phi, const std::vector<double>& epsilons,
                                   const VectorField& u0, const NoiseCoefficients& nc,
                                   const LevyMeasure& nu, const SolverConfig& config,
                                   const Condition2Options& options) {
  if (epsilons.empty()) throw std::invalid_argument("check_condition2: empty epsilon list");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || epsilons[i] > 1.0) {
      throw std::invalid_argument("check_condition2: epsilon outside (0, 1]");
    }
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw std::invalid_argument("check_condition2: epsilon list must be decreasing");
    }
  }
  if (options.ensemble == 0) throw std::invalid_argument("check_condition2: ensemble must be >= 1");
  if (!phi.is_bounded(options.control_bound)) {
    throw std::invalid_argument("check_condition2: control outside [1/n, n]");
  }

  SolverConfig cfg = config;
  cfg.keep_fields = true;
  const Trajectory skeleton = integrate_skeleton(u0, nc, nu, phi, cfg);
  if (skeleton.status != RunStatus::completed) {
    throw std::runtime_error("check_condition2: skeleton " + to_string(skeleton.status));
  }
  const double radius = options.exclusion_factor * z_norm(skeleton).metric();

  ConvergenceReport report;
  report.threshold = options.max_excluded_fraction;
  std::vector<double> means;
  bool exclusion_ok = true;
  for (double eps : epsilons) {
    const auto members = parallel_map(options.ensemble, options.threads, [&](std::size_t k) {
      const std::uint64_t seed = stream_seed(options.master_seed, k);
      const Trajectory traj = integrate_controlled(u0, nc, nu, eps, phi, seed, cfg,
                                                   options.control_bound);
      MemberResult r;
      if (traj.status != RunStatus::completed || z_norm(traj).metric() > radius) {
        r.excluded = true;
        return r;
      }
      const PathDistance d = z_distance(traj, skeleton);
      r.sup_h1 = d.sup_h1;
      r.l2_h3 = d.l2_h3;
      r.value = d.sup_h1 * d.sup_h1 + d.l2_h3 * d.l2_h3;
      return r;
    });

    std::vector<double> values;
    double sup_sum = 0.0, l2_sum = 0.0;
    for (const auto& m : members) {
      if (m.excluded) continue;
      values.push_back(m.value);
      sup_sum += m.sup_h1;
      l2_sum += m.l2_h3;
    }
    ConvergenceCase row;
    row.parameter = eps;
    row.samples = values.size();
    row.excluded_fraction =
        1.0 - static_cast<double>(values.size()) / static_cast<double>(members.size());
    row.cost = rate_cost(phi, nu);
    if (!values.empty()) {
      const double n = static_cast<double>(values.size());
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= n;
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      var = values.size() > 1 ? var / (n - 1.0) : 0.0;
      row.metric = mean;
      row.metric_se = std::sqrt(var / n);
      row.sup_h1 = sup_sum / n;
      row.l2_h3 = l2_sum / n;
    }
    if (row.excluded_fraction > options.max_excluded_fraction) exclusion_ok = false;
    means.push_back(row.metric);
    report.cases.push_back(row);
  }
  report.monotone = strictly_decreasing(means) || all_zero(means);
  report.below_threshold = exclusion_ok;
  report.passed = report.monotone && exclusion_ok;

  std::ostringstream out;
  out << "condition2: " << (report.passed ? "PASS" : "FAIL") << " (metric "
      << (report.monotone ? "decreasing" : "not decreasing") << " across epsilon, exclusion "
      << (exclusion_ok ? "within" : "above") << " limit " << options.max_excluded_fraction
      << ", ensemble " << options.ensemble << ", exclusion radius " << radius << ")";
  report.verdict = out.str();
  return report;
}

}  // namespace sllbar
