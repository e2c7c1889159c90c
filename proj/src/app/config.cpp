#include "sllbar/app/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "sllbar/app/csv.hpp"

namespace sllbar::app {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

std::size_t parse_size(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config: key '" + key + "' expects a nonnegative integer, got '" + text + "'");
  }
  return v;
}

FieldPreset parse_preset(const KeyValueConfig& raw, const std::string& prefix) {
  FieldPreset preset;
  const std::string kind = raw.get_string(prefix + ".preset", "zero");
  if (kind == "zero") {
    preset.kind = FieldPreset::Kind::zero;
  } else if (kind == "constant") {
    preset.kind = FieldPreset::Kind::constant;
    const auto v = raw.get_double_list(prefix + ".constant");
    if (v.size() != 3) throw ConfigError("config: " + prefix + ".constant needs three values");
    preset.constant = {v[0], v[1], v[2]};
  } else if (kind == "mode_mix") {
    preset.kind = FieldPreset::Kind::mode_mix;
    preset.terms = parse_mode_mix(raw.require_string(prefix + ".mode_mix"));
  } else if (kind == "file") {
    preset.kind = FieldPreset::Kind::file;
    preset.file = raw.require_string(prefix + ".file");
    if (!std::filesystem::exists(preset.file)) {
      throw ConfigError("config: " + prefix + ".file does not exist: " + preset.file.string());
    }
  } else {
    throw ConfigError("config: unknown preset '" + kind + "' for " + prefix);
  }
  return preset;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(number) + " is not `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(number));
    if (cfg.has(key)) throw ConfigError("config: duplicate key '" + key + "'");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config: file not found: " + path.string());
  return parse(read_text(path));
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string KeyValueConfig::require_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config: missing required key '" + key + "'");
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

std::size_t KeyValueConfig::get_size(const std::string& key, std::size_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_size(key, it->second);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw ConfigError("config: key '" + key + "' expects true/false");
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : get_string_list(key)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::string> KeyValueConfig::get_string_list(const std::string& key) const {
  std::vector<std::string> out;
  const auto it = values_.find(key);
  if (it == values_.end()) return out;
  for (const auto& item : split_row(it->second)) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::string KeyValueConfig::echo() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::vector<ModeTerm> parse_mode_mix(const std::string& text) {
  std::vector<ModeTerm> terms;
  for (const auto& item : split_row(text)) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    const auto parts = split_row(t, ':');
    if (parts.size() != 3) {
      throw ConfigError("config: mode_mix entry '" + t + "' must be mode:component:amplitude");
    }
    ModeTerm term{parse_size("mode_mix", parts[0]),
                  static_cast<int>(parse_size("mode_mix", parts[1])),
                  parse_double("mode_mix", parts[2])};
    if (term.component > 2) throw ConfigError("config: mode_mix component must be 0, 1 or 2");
    terms.push_back(term);
  }
  if (terms.empty()) throw ConfigError("config: empty mode_mix");
  return terms;
}

VectorField FieldPreset::build(const BasisPtr& basis) const {
  switch (kind) {
    case Kind::zero: return VectorField(basis);
    case Kind::constant: return VectorField::constant(basis, constant);
    case Kind::mode_mix: {
      VectorField out(basis);
      for (const auto& t : terms) {
        if (t.mode >= basis->modes()) {
          throw ConfigError("config: mode_mix mode " + std::to_string(t.mode) +
                            " exceeds basis.modes");
        }
        out(t.component, t.mode) += t.amplitude;
      }
      return out;
    }
    case Kind::file: return read_coefficients_csv(file, basis);
  }
  return VectorField(basis);
}

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& raw) {
  ExperimentConfig cfg;
  cfg.raw = raw;
  cfg.length = raw.get_double("domain.length", cfg.length);
  cfg.modes = raw.get_size("basis.modes", cfg.modes);
  cfg.grid = raw.get_size("basis.grid", 2 * cfg.modes);
  if (!(cfg.length > 0.0)) throw ConfigError("config: domain.length must be positive");
  if (cfg.modes < 1) throw ConfigError("config: basis.modes must be >= 1");
  if (cfg.grid < 2 * cfg.modes) throw ConfigError("config: basis.grid must be >= 2 * basis.modes");

  auto& s = cfg.solver;
  s.dt = raw.get_double("solver.dt", s.dt);
  s.horizon = raw.get_double("solver.horizon", s.horizon);
  s.blowup_cap = raw.get_double("solver.blowup_cap", s.blowup_cap);
  s.record_every = raw.get_size("solver.record_every", s.record_every);
  s.keep_fields = raw.get_bool("solver.keep_fields", s.keep_fields);
  const std::string scheme = raw.get_string("solver.scheme", "etd_rk2");
  if (scheme == "etd_rk2") {
    s.scheme = Scheme::etd_rk2;
  } else if (scheme == "imex_euler") {
    s.scheme = Scheme::imex_euler;
  } else {
    throw ConfigError("config: unknown solver.scheme '" + scheme + "'");
  }
  const std::string convention = raw.get_string("solver.jump_convention", "as_written");
  if (convention == "as_written") {
    s.jump_convention = JumpConvention::as_written;
  } else if (convention == "rescaled_mark") {
    s.jump_convention = JumpConvention::rescaled_mark;
  } else {
    throw ConfigError("config: unknown solver.jump_convention '" + convention + "'");
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  cfg.initial = parse_preset(raw, "initial");
  cfg.h = parse_preset(raw, "noise.h");
  cfg.g = parse_preset(raw, "noise.g");

  std::vector<LevyAtom> atoms;
  for (std::size_t i = 1;; ++i) {
    const std::string prefix = "levy.atom." + std::to_string(i);
    if (!raw.has(prefix + ".mark") && !raw.has(prefix + ".weight")) break;
    atoms.push_back({parse_double(prefix + ".mark", raw.require_string(prefix + ".mark")),
                     parse_double(prefix + ".weight", raw.require_string(prefix + ".weight"))});
  }
  try {
    cfg.nu = LevyMeasure(std::move(atoms));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  cfg.epsilon = raw.get_double("scale.epsilon", cfg.epsilon);
  if (!(cfg.epsilon > 0.0) || cfg.epsilon > 1.0) throw ConfigError("config: scale.epsilon must lie in (0, 1]");
  cfg.epsilon_list = raw.get_double_list("scale.epsilon_list");
  if (raw.has("control.file")) {
    cfg.control_file = raw.require_string("control.file");
    if (!std::filesystem::exists(*cfg.control_file)) {
      throw ConfigError("config: control.file does not exist: " + cfg.control_file->string());
    }
  }
  cfg.control_bound = raw.get_double("control.bound", cfg.control_bound);

  cfg.seed = static_cast<std::uint64_t>(raw.get_size("run.seed", cfg.seed));
  cfg.ensemble = raw.get_size("ensemble.size", cfg.ensemble);
  cfg.threads = static_cast<unsigned>(raw.get_size("run.threads", cfg.threads));
  cfg.output_dir = raw.get_string("run.output", cfg.output_dir.string());
  return cfg;
}

BasisPtr ExperimentConfig::basis() const { return build_basis(length, modes, grid); }

}  // namespace sllbar::app
