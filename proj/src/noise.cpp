#include "sllbar/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sllbar {

LevyMeasure::LevyMeasure(std::vector<LevyAtom> atoms) : atoms_(std::move(atoms)) {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (!std::isfinite(a.mark) || a.mark == 0.0 || std::abs(a.mark) > 1.0) {
      throw std::invalid_argument("LevyMeasure: marks must satisfy 0 < |l| <= 1");
    }
    if (!std::isfinite(a.weight) || !(a.weight > 0.0)) {
      throw std::invalid_argument("LevyMeasure: weights must be positive");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (atoms_[j].mark == a.mark) throw std::invalid_argument("LevyMeasure: duplicate atom");
    }
  }
}

double LevyMeasure::total_mass() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.weight;
  return total;
}

double LevyMeasure::first_moment() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.weight * a.mark;
  return total;
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ a) ^ (b + 0x632be59bd9b4e019ULL));
}

namespace {

void validate_scale(double horizon, double epsilon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("PRM sampling: horizon must be positive");
  }
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    throw std::invalid_argument("PRM sampling: epsilon must lie in (0, 1]");
  }
}

// Poisson number of uniform times on (0, T] at the given intensity, followed by
// the thinning draws. Plain sampling is thinning with acceptance ratio one, so
// both samplers consume the stream in the same order.
void sample_atom(std::mt19937_64& rng, double intensity, double horizon, std::size_t atom,
                 const Control* phi, double phi_sup, std::vector<JumpEvent>& out) {
  std::poisson_distribution<long long> count_dist(intensity * horizon);
  const long long count = intensity > 0.0 ? count_dist(rng) : 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> times(static_cast<std::size_t>(count));
  for (auto& t : times) t = horizon * (1.0 - unit(rng));
  for (double t : times) {
    if (phi != nullptr) {
      const double accept = (*phi)(t, atom) / phi_sup;
      if (!(unit(rng) < accept)) continue;
    }
    out.push_back({t, atom});
  }
}

void sort_events(std::vector<JumpEvent>& events) {
  std::sort(events.begin(), events.end(), [](const JumpEvent& a, const JumpEvent& b) {
    return a.t < b.t || (a.t == b.t && a.atom < b.atom);
  });
}

}  // namespace

JumpPath sample_prm(const LevyMeasure& nu, double horizon, double epsilon, std::uint64_t seed) {
  validate_scale(horizon, epsilon);
  JumpPath path{{}, horizon, epsilon, seed};
  for (std::size_t j = 0; j < nu.size(); ++j) {
    std::mt19937_64 rng(stream_seed(seed, j));
    const double intensity = nu.atoms()[j].weight / epsilon;
    sample_atom(rng, intensity, horizon, j, nullptr, 1.0, path.events);
  }
  sort_events(path.events);
  return path;
}

JumpPath sample_controlled_prm(const LevyMeasure& nu, const Control& phi, double horizon,
                               double epsilon, std::uint64_t seed, double control_bound) {
  validate_scale(horizon, epsilon);
  if (phi.atoms() != nu.size()) {
    throw std::invalid_argument("sample_controlled_prm: control channels != atoms");
  }
  if (std::abs(phi.horizon() - horizon) > 1e-12 * horizon) {
    throw std::invalid_argument("sample_controlled_prm: control horizon mismatch");
  }
  if (!phi.is_bounded(control_bound)) {
    throw std::invalid_argument("sample_controlled_prm: control outside [1/n, n]");
  }
  JumpPath path{{}, horizon, epsilon, seed};
  for (std::size_t j = 0; j < nu.size(); ++j) {
    std::mt19937_64 rng(stream_seed(seed, j));
    const double sup = phi.sup(j);
    const double intensity = nu.atoms()[j].weight * sup / epsilon;
    sample_atom(rng, intensity, horizon, j, &phi, sup, path.events);
  }
  sort_events(path.events);
  return path;
}

}  // namespace sllbar
