#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "viscotherm/convergence.hpp"
#include "viscotherm/diagnostics.hpp"
#include "viscotherm/state.hpp"

namespace viscotherm {

/// 17 significant digits, enough to reproduce every double exactly.
std::string format_double(double x);
double parse_double(const std::string& text);

/// Long format, header "t,x,v,u,theta", one row per (record, node). Every `stride`-th
/// recorded state is written, and the last one always.
void write_states_csv(const std::filesystem::path& path, const Trajectory& traj, int stride = 1);
/// Inverse of write_states_csv: states grouped by consecutive equal t.
std::vector<State> read_states_csv(const std::filesystem::path& path);

void write_energy_csv(const std::filesystem::path& path, const EnergyReport& report);
void write_estimates_csv(const std::filesystem::path& path,
                         const std::vector<EstimateReport>& reports);
void write_weak_residuals_csv(const std::filesystem::path& path,
                              const WeakResidualReport& report);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep);
void write_refinement_csv(const std::filesystem::path& path, const RefinementTable& table);

/// Minimal line plot: one polyline per series, optional log scale on y.
struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};
void write_line_plot_svg(const std::filesystem::path& path, const std::string& title,
                         const std::string& x_label, const std::vector<SvgSeries>& series,
                         bool log_y = false);

/// Simple reader used by tests and tools: rows of a CSV file with a header line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace viscotherm
