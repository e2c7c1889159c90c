#include "sllbar/app/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sllbar/app/config.hpp"

namespace sllbar::app {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

std::vector<std::string> split_row(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) {
    if (!item.empty() && item.back() == '\r') item.pop_back();
    out.push_back(item);
  }
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("io: cannot write " + path.string());
  out << content;
  if (!out) throw IoError("io: write failed for " + path.string());
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  const bool fields = !traj.states.empty() && traj.states.size() == traj.times.size();
  out << "t";
  if (fields) {
    const std::size_t n = traj.states.front().modes();
    for (int c = 0; c < 3; ++c) {
      for (std::size_t k = 0; k < n; ++k) out << ",c" << c << "_" << k;
    }
  }
  out << ",h1_sq,h3_sq\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_double(traj.times[i]);
    if (fields) {
      for (double v : traj.states[i].coeffs()) out << "," << format_double(v);
    }
    out << "," << format_double(traj.h1_sq[i]) << "," << format_double(traj.h3_sq[i]) << "\n";
  }
  return out.str();
}

std::string jump_log_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,mark,pre_h1,post_h1\n";
  for (const auto& j : traj.jumps) {
    out << format_double(j.t) << "," << format_double(j.mark) << "," << format_double(j.pre_h1)
        << "," << format_double(j.post_h1) << "\n";
  }
  return out.str();
}

std::string jump_path_csv(const JumpPath& path, const LevyMeasure& nu) {
  std::ostringstream out;
  out << "t,mark,atom_index\n";
  for (const auto& ev : path.events) {
    out << format_double(ev.t) << "," << format_double(nu.atoms().at(ev.atom).mark) << ","
        << ev.atom << "\n";
  }
  return out.str();
}

std::string energy_csv(const std::vector<EnergyRecord>& records) {
  std::ostringstream out;
  out << "t,l2_sq,h1_sq,lap_sq,l4_4,fbar,heff_h1_sq\n";
  for (const auto& r : records) {
    out << format_double(r.t) << "," << format_double(r.l2_sq) << "," << format_double(r.h1_sq)
        << "," << format_double(r.lap_sq) << "," << format_double(r.l4_4) << ","
        << format_double(r.fbar) << "," << format_double(r.heff_h1_sq) << "\n";
  }
  return out.str();
}

std::string condition1_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "n,sup_h1,l2_h3,metric,cost\n";
  for (const auto& c : report.cases) {
    out << format_double(c.parameter) << "," << format_double(c.sup_h1) << ","
        << format_double(c.l2_h3) << "," << format_double(c.metric) << ","
        << format_double(c.cost) << "\n";
  }
  return out.str();
}

std::string condition2_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "epsilon,metric_mean,metric_se,excluded_fraction\n";
  for (const auto& c : report.cases) {
    out << format_double(c.parameter) << "," << format_double(c.metric) << ","
        << format_double(c.metric_se) << "," << format_double(c.excluded_fraction) << "\n";
  }
  return out.str();
}

namespace {

double to_double(const std::string& s, const std::filesystem::path& path) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("csv: bad number '" + s + "' in " + path.string());
  }
  return v;
}

std::size_t to_index(const std::string& s, const std::filesystem::path& path) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("csv: bad index '" + s + "' in " + path.string());
  }
  return v;
}

// Rows of a CSV file keyed by header name.
std::vector<std::map<std::string, std::string>> read_rows(
    const std::filesystem::path& path, const std::vector<std::string>& required) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: empty file " + path.string());
  const auto header = split_row(line);
  for (const auto& r : required) {
    if (std::find(header.begin(), header.end(), r) == header.end()) {
      throw ConfigError("csv: " + path.string() + " lacks column '" + r + "'");
    }
  }
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw ConfigError("csv: ragged row in " + path.string());
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < cells.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Control read_control_csv(const std::filesystem::path& path, std::size_t atoms, double horizon) {
  struct Row {
    double start, end;
    std::size_t atom;
    double theta;
  };
  std::vector<Row> rows;
  std::set<double> breaks{0.0, horizon};
  for (const auto& r : read_rows(path, {"t_start", "t_end", "atom_index", "theta"})) {
    Row row{to_double(r.at("t_start"), path), to_double(r.at("t_end"), path),
            to_index(r.at("atom_index"), path), to_double(r.at("theta"), path)};
    if (!(row.end > row.start) || row.start < 0.0 || row.end > horizon * (1 + 1e-12)) {
      throw ConfigError("control: interval outside [0, T] in " + path.string());
    }
    if (row.atom >= atoms) throw ConfigError("control: atom_index out of range in " + path.string());
    if (row.theta < 0.0) throw ConfigError("control: negative theta in " + path.string());
    row.end = std::min(row.end, horizon);
    breaks.insert(row.start);
    breaks.insert(row.end);
    rows.push_back(row);
  }
  std::vector<double> bp(breaks.begin(), breaks.end());
  const std::size_t pieces = bp.size() - 1;
  std::vector<double> values(pieces * atoms, -1.0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < pieces; ++i) {
      if (bp[i] >= row.start && bp[i + 1] <= row.end) values[i * atoms + row.atom] = row.theta;
    }
  }
  if (std::any_of(values.begin(), values.end(), [](double v) { return v < 0.0; })) {
    throw ConfigError("control: " + path.string() + " does not cover [0, T] for every atom");
  }
  return Control(std::move(bp), atoms, std::move(values));
}

std::string control_csv(const Control& control) {
  std::ostringstream out;
  out << "t_start,t_end,atom_index,theta\n";
  const auto bp = control.breakpoints();
  for (std::size_t i = 0; i < control.pieces(); ++i) {
    for (std::size_t j = 0; j < control.atoms(); ++j) {
      out << format_double(bp[i]) << "," << format_double(bp[i + 1]) << "," << j << ","
          << format_double(control.value(i, j)) << "\n";
    }
  }
  return out.str();
}

JumpPath read_jump_path_csv(const std::filesystem::path& path, const LevyMeasure& nu,
                            double horizon, double epsilon) {
  JumpPath out;
  out.horizon = horizon;
  out.epsilon = epsilon;
  for (const auto& r : read_rows(path, {"t", "mark", "atom_index"})) {
    const JumpEvent ev{to_double(r.at("t"), path), to_index(r.at("atom_index"), path)};
    if (ev.atom >= nu.size()) throw ConfigError("path: atom_index out of range");
    if (to_double(r.at("mark"), path) != nu.atoms()[ev.atom].mark) {
      throw ConfigError("path: mark does not match the configured atom");
    }
    out.events.push_back(ev);
  }
  return out;
}

VectorField read_coefficients_csv(const std::filesystem::path& path, const BasisPtr& basis) {
  VectorField out(basis);
  for (const auto& r : read_rows(path, {"component", "mode", "value"})) {
    const std::size_t c = to_index(r.at("component"), path);
    const std::size_t k = to_index(r.at("mode"), path);
    if (c > 2 || k >= basis->modes()) {
      throw ConfigError("coefficients: entry out of range in " + path.string());
    }
    out(static_cast<int>(c), k) = to_double(r.at("value"), path);
  }
  return out;
}

}  // namespace sllbar::app
