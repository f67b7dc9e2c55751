#pragma once

#include <string>

namespace muskat {

// Runtime configuration for simulations, extensions and verification runs.
// Parsed from a flat "key = value" document; [section] headers only prefix keys.
struct ScenarioConfig {
  std::string preset = "stable";  // stable | backward | turnover | custom
  int n = 512;
  double dt_override = 0.0;  // 0 => CFL-derived step
  double t_end = 0.1;
  double rho_bar = 1.0;
  double delta = 0.5;
  double delta_c = 0.05;
  double eps = 1e-2;
  int m = 2;
  int gamma_nodes = 9;
  int output_every = 10;
  std::string out_dir;
  unsigned long seed = 0;
  bool dealias = true;
  double amplitude = 0.1;
  double cfl_safety = 0.25;
  double tol_residual = 1e-6;
  std::string curve_csv;  // input curve for preset = custom

  void validate() const;
  std::string to_text() const;  // canonical echo, parse round-trips
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

}  // namespace muskat
