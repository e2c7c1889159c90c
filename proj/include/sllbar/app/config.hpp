#pragma once

// Flat `key = value` experiment configuration.
//
//   # comment
//   domain.length = 3.141592653589793
//   basis.modes = 16
//   levy.atom.1.mark = 0.5
//   levy.atom.1.weight = 1.0
//
// Field presets (initial, noise.h, noise.g) take
//   <prefix>.preset   = zero | constant | mode_mix | file
//   <prefix>.constant = a, b, c
//   <prefix>.mode_mix = mode:component:amplitude, ...
//   <prefix>.file     = coefficient CSV with columns component,mode,value

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sllbar/control.hpp"
#include "sllbar/field.hpp"
#include "sllbar/integrator.hpp"
#include "sllbar/noise.hpp"

namespace sllbar::app {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }
  /// Sorted `key = value` lines.
  std::string echo() const;

 private:
  std::map<std::string, std::string> values_;
};

struct ModeTerm {
  std::size_t mode;
  int component;
  double amplitude;
};

struct FieldPreset {
  enum class Kind { zero, constant, mode_mix, file };
  Kind kind = Kind::zero;
  Vec3 constant{};
  std::vector<ModeTerm> terms;
  std::filesystem::path file;

  VectorField build(const BasisPtr& basis) const;
};

struct ExperimentConfig {
  KeyValueConfig raw;

  double length = 3.141592653589793;
  std::size_t modes = 16;
  std::size_t grid = 32;
  SolverConfig solver;

  FieldPreset initial;
  FieldPreset h;
  FieldPreset g;
  LevyMeasure nu;

  double epsilon = 1.0;
  std::vector<double> epsilon_list;
  std::optional<std::filesystem::path> control_file;
  double control_bound = 100.0;

  std::uint64_t seed = 1;
  std::size_t ensemble = 64;
  unsigned threads = 0;
  std::filesystem::path output_dir = "out";

  static ExperimentConfig from(const KeyValueConfig& raw);

  BasisPtr basis() const;
};

/// Comma-separated `mode:component:amplitude` list.
std::vector<ModeTerm> parse_mode_mix(const std::string& text);

}  // namespace sllbar::app
