#include "sllbar/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sllbar {

namespace {

double grid_l4_4(const VectorField& u) {
  const std::size_t m = u.basis().grid_points();
  const auto g = u.grid_values();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3 v = grid_point(g, m, i);
    const double s = dot(v, v);
    total += s * s;
  }
  return total * u.basis().weight();
}

double gradient_sq(const VectorField& u) {
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < u.modes(); ++k) total += u.basis().eigenvalue(k) * u(c, k) * u(c, k);
  }
  return total;
}

}  // namespace

double energy_fbar(const VectorField& u) {
  return 0.5 * gradient_sq(u) + 0.5 * grid_l4_4(u) - sobolev_norm_sq(u, 0);
}

double dissipation_rate(const VectorField& u) { return sobolev_norm_sq(effective_field(u), 1); }

EnergyRecord energy_record(double t, const VectorField& u) {
  EnergyRecord r;
  r.t = t;
  if (!u.is_finite()) {
    r.finite = false;
    r.l2_sq = r.h1_sq = r.lap_sq = r.l4_4 = r.fbar = r.heff_h1_sq =
        std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.l2_sq = sobolev_norm_sq(u, 0);
  r.h1_sq = sobolev_norm_sq(u, 1);
  r.lap_sq = sobolev_norm_sq(laplacian(u), 0);
  r.l4_4 = grid_l4_4(u);
  r.fbar = 0.5 * gradient_sq(u) + 0.5 * r.l4_4 - r.l2_sq;
  r.heff_h1_sq = sobolev_norm_sq(effective_field(u), 1);
  r.finite = std::isfinite(r.fbar) && std::isfinite(r.heff_h1_sq);
  return r;
}

EnergyAudit energy_audit(const Trajectory& traj, const EnergyAuditOptions& options) {
  if (traj.states.size() != traj.times.size() || traj.states.empty()) {
    throw std::invalid_argument("energy_audit: trajectory has no field snapshots");
  }
  EnergyAudit audit;
  audit.relative_tolerance = options.relative_tolerance;
  audit.grid_points = traj.states.front().basis().grid_points();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    audit.records.push_back(energy_record(traj.times[i], traj.states[i]));
    audit.all_finite = audit.all_finite && audit.records.back().finite;
  }

  audit.monotonicity_checked = options.no_noise;
  if (options.no_noise) {
    for (std::size_t i = 1; i < audit.records.size(); ++i) {
      const double prev = audit.records[i - 1].fbar;
      const double increase = (audit.records[i].fbar - prev) / (1.0 + std::abs(prev));
      audit.worst_increase = std::max(audit.worst_increase, increase);
      if (!(increase <= options.relative_tolerance)) audit.fbar_nonincreasing = false;
    }
  }
  audit.h3_integral = traj.integral_h3_sq();
  audit.h3_integral_finite = std::isfinite(audit.h3_integral);
  audit.passed = audit.all_finite && audit.h3_integral_finite &&
                 (!options.no_noise || audit.fbar_nonincreasing);

  std::ostringstream out;
  out << "energy audit: " << (audit.passed ? "PASS" : "FAIL") << "\n"
      << "  grid points: " << audit.grid_points << "\n"
      << "  finite records: " << (audit.all_finite ? "yes" : "no") << "\n";
  if (options.no_noise) {
    out << "  fbar nonincreasing (tol " << options.relative_tolerance << "): "
        << (audit.fbar_nonincreasing ? "yes" : "no") << ", worst relative increase "
        << audit.worst_increase << "\n";
  } else {
    out << "  fbar monotonicity: not checked (noise present)\n";
  }
  out << "  int ||u||_H3^2 dt = " << audit.h3_integral
      << (audit.h3_integral_finite ? " (finite)" : " (NOT finite)");
  audit.verdict = out.str();
  return audit;
}

MomentReport moment_bounds(std::span<const Trajectory> ensemble,
                           std::span<const std::size_t> modes, int p, double tolerance) {
  if (ensemble.empty()) throw std::invalid_argument("moment_bounds: empty ensemble");
  if (modes.size() != ensemble.size()) {
    throw std::invalid_argument("moment_bounds: one mode label per trajectory required");
  }
  if (p < 1) throw std::invalid_argument("moment_bounds: moment order must be >= 1");
  const double horizon = ensemble.front().times.back();
  for (const auto& traj : ensemble) {
    if (std::abs(traj.times.back() - horizon) > 1e-12 * std::max(1.0, horizon)) {
      throw std::invalid_argument("moment_bounds: mixed horizons");
    }
  }

  std::map<std::size_t, MomentGroup> groups;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    auto& g = groups[modes[i]];
    g.modes = modes[i];
    ++g.count;
    g.sup_h1_moment += std::pow(ensemble[i].sup_h1_sq(), p);
    g.h3_moment += std::pow(ensemble[i].integral_h3_sq(), p);
  }

  MomentReport report;
  report.p = p;
  report.tolerance = tolerance;
  for (auto& [n, g] : groups) {
    g.sup_h1_moment /= static_cast<double>(g.count);
    g.h3_moment /= static_cast<double>(g.count);
    report.groups.push_back(g);
  }
  auto variation = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
  };
  for (std::size_t i = 1; i < report.groups.size(); ++i) {
    const auto& a = report.groups[i - 1];
    const auto& b = report.groups[i];
    report.max_relative_variation =
        std::max({report.max_relative_variation, variation(a.sup_h1_moment, b.sup_h1_moment),
                  variation(a.h3_moment, b.h3_moment)});
  }
  report.passed = report.max_relative_variation < tolerance;

  std::ostringstream out;
  out << "moment bounds (p = " << p << "): " << (report.passed ? "PASS" : "FAIL")
      << ", max relative variation " << report.max_relative_variation << " vs tolerance "
      << tolerance;
  report.verdict = out.str();
  return report;
}

double gn_check(const VectorField& u) {
  const double h1 = sobolev_norm_sq(u, 1);
  const double h2 = sobolev_norm_sq(u, 2);
  if (!(h1 > 0.0)) throw std::invalid_argument("gn_check: zero field");
  const std::size_t m = u.basis().grid_points();
  const auto g = u.grid_values();
  double sup = 0.0;
  for (std::size_t i = 0; i < m; ++i) sup = std::max(sup, norm(grid_point(g, m, i)));
  return sup / (std::pow(h1, 0.25) * std::pow(h2, 0.25));
}

double projection_discrepancy(double l, const VectorField& u, const NoiseCoefficients& nc,
                              std::size_t n, int rk4_steps) {
  if (n > u.modes()) throw std::invalid_argument("projection_discrepancy: n exceeds modes");
  const VectorField pointwise = project(marcus_flow(l, project(u, n), nc), n);
  const VectorField galerkin = projected_marcus_flow(l, u, nc, n, rk4_steps);
  return std::sqrt(sobolev_norm_sq(pointwise - galerkin, 1));
}

double weak_form_residual(const Trajectory& traj, std::size_t k, std::size_t quadrature_points) {
  if (traj.states.size() != traj.times.size() || traj.states.size() < 2) {
    throw std::invalid_argument("weak_form_residual: trajectory needs field snapshots");
  }
  const Basis& basis = traj.states.front().basis();
  if (k >= basis.modes()) throw std::invalid_argument("weak_form_residual: test mode out of range");
  const std::size_t q = quadrature_points ? quadrature_points : std::max<std::size_t>(512, 8 * basis.modes());
  const double w = basis.length() / static_cast<double>(q);
  std::vector<double> x(q);
  for (std::size_t i = 0; i < q; ++i) x[i] = (static_cast<double>(i) + 0.5) * w;
  std::vector<double> phi(q), dphi(q);
  for (std::size_t i = 0; i < q; ++i) {
    phi[i] = basis.eigenfunction(k, x[i]);
    dphi[i] = basis.eigenfunction_derivative(k, x[i]);
  }

  struct Sample {
    Vec3 pairing{};  // (u, e_k)
    Vec3 rhs{};      // weak-form integrand
    Vec3 magnitude{};
  };
  auto sample = [&](const VectorField& u) {
    const VectorField lap = laplacian(u);
    std::array<std::vector<double>, 3> val, der, lap_der;
    for (int c = 0; c < 3; ++c) {
      val[c] = basis.evaluate(u.component(c), x);
      der[c] = basis.evaluate_derivative(u.component(c), x);
      lap_der[c] = basis.evaluate_derivative(lap.component(c), x);
    }
    Sample s;
    for (std::size_t i = 0; i < q; ++i) {
      const Vec3 v{val[0][i], val[1][i], val[2][i]};
      const Vec3 dv{der[0][i], der[1][i], der[2][i]};
      const Vec3 dlap{lap_der[0][i], lap_der[1][i], lap_der[2][i]};
      const double sq = dot(v, v);
      const Vec3 uxdu = cross(v, dv);
      const Vec3 dcubic = (2.0 * dot(v, dv)) * v + sq * dv;
      for (int c = 0; c < 3; ++c) {
        const double terms[5] = {dv[c] * dphi[i], dlap[c] * dphi[i],
                                 2.0 * (1.0 - sq) * v[c] * phi[i], uxdu[c] * dphi[i],
                                 -2.0 * dcubic[c] * dphi[i]};
        s.pairing[c] += w * v[c] * phi[i];
        for (double t : terms) {
          s.rhs[c] += w * t;
          s.magnitude[c] += w * std::abs(t);
        }
      }
    }
    return s;
  };

  std::vector<Sample> samples;
  samples.reserve(traj.size());
  for (const auto& u : traj.states) samples.push_back(sample(u));

  Vec3 integral{}, magnitude{};
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double dt = traj.times[i] - traj.times[i - 1];
    integral = integral + (0.5 * dt) * (samples[i].rhs + samples[i - 1].rhs);
    magnitude = magnitude + (0.5 * dt) * (samples[i].magnitude + samples[i - 1].magnitude);
  }
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double change = samples.back().pairing[c] - samples.front().pairing[c];
    const double scale = magnitude[c] + std::abs(samples.back().pairing[c]) +
                         std::abs(samples.front().pairing[c]);
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(change - integral[c]) / scale);
  }
  return worst;
}

}  // namespace sllbar
