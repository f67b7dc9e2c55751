#pragma once

#include <optional>
#include <string>
#include <vector>

#include "muskat/complexify.hpp"
#include "muskat/config.hpp"

namespace muskat {

struct ScenarioRow {
  double t = 0.0;
  double Z1 = 0.0, Z2 = 0.0;          // NaN when the regime has no turnovers
  double sigma_min = 0.0, sigma_max = 0.0;
  double arc_chord = 0.0;
  double l2_f1 = 0.0, h1_f1 = 0.0;    // norms of f1 - alpha
  double l2_f2 = 0.0, h1_f2 = 0.0;
  double strip_width = 0.0;
  double cusp_eps2 = 0.0;             // quadratic-cusp fit of the local strip width at Z1
  double kappa = 0.0, tau = 0.0;
  double tail = 0.0;                  // Fourier tail norm
};

struct ScenarioResult {
  std::vector<ScenarioRow> rows;
  PeriodicInterface final_curve;
  std::string regime;                 // regime of the initial data
  bool completed = false;             // false when a numerical failure truncated the run
  std::string failure;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

PeriodicInterface initial_curve(const ScenarioConfig& cfg);

// `extend` subcommand: Fourier continuation of the configured curve onto the
// contour family and residual reports, serialized as a JSON bundle.
struct ExtendReport {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  int grid = 0;
  int gamma_nodes = 0;
};

std::vector<ExtendReport> run_extend(const ScenarioConfig& cfg);

std::string render_reports_json(const std::vector<ExtendReport>& reports, const std::string& kind);

// `report` subcommand: human-oriented summary of a finished run directory.
std::string summarize_run(const std::string& run_dir);

}  // namespace muskat
