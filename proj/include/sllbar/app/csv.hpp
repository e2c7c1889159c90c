#pragma once

// Plain UTF-8 CSV exchange formats. Numbers are written in shortest
// round-trip decimal form.

#include <filesystem>
#include <string>
#include <vector>

#include "sllbar/control.hpp"
#include "sllbar/diagnostics.hpp"
#include "sllbar/integrator.hpp"
#include "sllbar/ldp.hpp"
#include "sllbar/noise.hpp"

namespace sllbar::app {

std::string format_double(double v);

/// t, c{component}_{mode}... when fields were kept, then h1_sq, h3_sq.
std::string trajectory_csv(const Trajectory& traj);
/// t, mark, pre_h1, post_h1
std::string jump_log_csv(const Trajectory& traj);
/// t, mark, atom_index
std::string jump_path_csv(const JumpPath& path, const LevyMeasure& nu);
/// t, l2_sq, h1_sq, lap_sq, l4_4, fbar, heff_h1_sq
std::string energy_csv(const std::vector<EnergyRecord>& records);
/// n, sup_h1, l2_h3, metric, cost
std::string condition1_csv(const ConvergenceReport& report);
/// epsilon, metric_mean, metric_se, excluded_fraction
std::string condition2_csv(const ConvergenceReport& report);

/// Rows t_start,t_end,atom_index,theta covering [0, T] for every atom.
Control read_control_csv(const std::filesystem::path& path, std::size_t atoms, double horizon);
std::string control_csv(const Control& control);

/// Replays a path written by jump_path_csv.
JumpPath read_jump_path_csv(const std::filesystem::path& path, const LevyMeasure& nu,
                            double horizon, double epsilon);

/// Rows component,mode,value; unspecified coefficients are zero.
VectorField read_coefficients_csv(const std::filesystem::path& path, const BasisPtr& basis);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& content);

/// Splits one CSV row; no quoting support.
std::vector<std::string> split_row(const std::string& line, char sep = ',');

}  // namespace sllbar::app
