#pragma once

// CSV emission and read-back for trajectories, diagnostics and metrics, plus
// per-figure plot column files. Doubles are written in shortest round-trip
// form, so every file parses back to bit-identical values.

#include <itg/runner.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace itg {

std::string format_double(double v);
double parse_double(std::string_view s);

/// Splits one CSV line; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);
std::string quote_csv_field(std::string_view field);

RunStatus parse_run_status(std::string_view s);
ActiveStage parse_active_stage(std::string_view s);

void write_trajectory_csv(std::ostream& os, std::span<const TrajectoryRecord> rows);
std::vector<TrajectoryRecord> read_trajectory_csv(std::istream& is);

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticRecord> rows);
std::vector<DiagnosticRecord> read_diagnostics_csv(std::istream& is);

void write_metrics_csv(std::ostream& os, std::span<const RunMetrics> rows);
std::vector<RunMetrics> read_metrics_csv(std::istream& is);

/// Column files for the standard figures: <label>_xy.dat (x y),
/// <label>_tgo.dat (t t_go t_go_d t_go_M), <label>_am_sigma.dat (t a_M sigma),
/// <label>_amc.dat (t a_M_c a_M_achieved). Whitespace separated with a
/// leading '#' header line.
void write_plot_data(const std::filesystem::path& dir, const std::string& label, double t_d,
                     std::span<const TrajectoryRecord> rows);

/// Writes the full output tree for a batch: trajectories/<label>.csv,
/// diagnostics/<label>.csv, plots/<label>_*.dat, metrics.csv and
/// effort_table.{csv,txt}. Creates `dir` if needed and overwrites files.
void write_run_outputs(const std::filesystem::path& dir, std::span<const ScenarioConfig> cfgs,
                       std::span<const RunResult> results);

/// Labels are used as file stems; anything outside [A-Za-z0-9._-] becomes '_'.
std::string file_stem(std::string_view label);

}  // namespace itg
