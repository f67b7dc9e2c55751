// muskat-lab: contour-dynamics laboratory for the 2D periodic Muskat problem.
//
// Subcommands:
//   run     evolve a scenario preset and write its diagnostic time series
//   verify  run the numerical verification suite (exit 3 on any failed check)
//   extend  complex-continue a curve onto the contour family, report residuals
//   report  summarize a finished run directory
//
// The binary is a thin shell over the C API in muskat.h.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "muskat.h"

namespace {

int status_to_exit(muskat_status st) {
  switch (st) {
    case MUSKAT_OK:
      return 0;
    case MUSKAT_ERR_INVALID:
      return 1;
    case MUSKAT_ERR_NUMERICAL:
      return 2;
    case MUSKAT_ERR_CHECKS:
      return 3;
    default:
      return 1;
  }
}

struct ConfigHandle {
  muskat_config* cfg = nullptr;
  ConfigHandle() : cfg(muskat_config_create()) {}
  ~ConfigHandle() { muskat_config_free(cfg); }
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
};

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::string seed, eps, n, t_end, m, curve_csv;
};

void add_common(CLI::App* app, CommonOpts& o) {
  app->add_option("--config", o.config_path, "configuration file (key = value lines)");
  app->add_option("--preset", o.preset, "stable|backward|turnover|custom");
  app->add_option("--out", o.out_dir, "output directory");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--eps", o.eps, "regularization scale");
  app->add_option("--n", o.n, "grid size (power of two in [64, 4096])");
  app->add_option("--t-end", o.t_end, "final time");
  app->add_option("--m", o.m, "derivative order of the evolved quantity");
  app->add_option("--curve", o.curve_csv, "input curve CSV for preset=custom");
}

int apply_common(muskat_config* cfg, const CommonOpts& o) {
  muskat_status st = MUSKAT_OK;
  if (!o.config_path.empty()) st = muskat_config_load(cfg, o.config_path.c_str());
  auto set = [&](const char* key, const std::string& v) {
    if (st == MUSKAT_OK && !v.empty()) st = muskat_config_set(cfg, key, v.c_str());
  };
  set("preset", o.preset);
  set("out_dir", o.out_dir);
  set("seed", o.seed);
  set("eps", o.eps);
  set("n", o.n);
  set("t_end", o.t_end);
  set("m", o.m);
  set("curve_csv", o.curve_csv);
  if (st != MUSKAT_OK) std::fprintf(stderr, "muskat-lab: %s\n", muskat_last_error());
  return status_to_exit(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"muskat-lab: contour dynamics laboratory for the 2D periodic Muskat problem"};
  app.require_subcommand(1);

  CommonOpts run_opts, verify_opts, extend_opts;
  std::string report_dir;

  CLI::App* run = app.add_subcommand("run", "evolve a scenario and record diagnostics");
  add_common(run, run_opts);
  CLI::App* verify = app.add_subcommand("verify", "run the numerical verification suite");
  add_common(verify, verify_opts);
  CLI::App* extend = app.add_subcommand("extend", "complex extension + residual reports");
  add_common(extend, extend_opts);
  CLI::App* report = app.add_subcommand("report", "summarize a run directory");
  report->add_option("dir", report_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  if (run->parsed()) {
    ConfigHandle h;
    int rc = apply_common(h.cfg, run_opts);
    if (rc) return rc;
    const char* out = run_opts.out_dir.empty() ? "out" : run_opts.out_dir.c_str();
    muskat_status st = muskat_config_set(h.cfg, "out_dir", out);
    if (st == MUSKAT_OK) st = muskat_run_scenario(h.cfg, out);
    if (st != MUSKAT_OK) std::fprintf(stderr, "muskat-lab run: %s\n", muskat_last_error());
    if (st == MUSKAT_OK) std::printf("run complete: %s/series.csv\n", out);
    return status_to_exit(st);
  }

  if (verify->parsed()) {
    ConfigHandle h;
    int rc = apply_common(h.cfg, verify_opts);
    if (rc) return rc;
    std::string out_json = verify_opts.out_dir.empty() ? "verify_reports.json"
                                                       : verify_opts.out_dir + "/verify_reports.json";
    int failed = 0;
    muskat_status st = muskat_run_verify(h.cfg, out_json.c_str(), &failed);
    if (st == MUSKAT_OK)
      std::printf("verification passed, report: %s\n", out_json.c_str());
    else
      std::fprintf(stderr, "muskat-lab verify: %d failed (%s)\n", failed, muskat_last_error());
    return status_to_exit(st);
  }

  if (extend->parsed()) {
    ConfigHandle h;
    int rc = apply_common(h.cfg, extend_opts);
    if (rc) return rc;
    std::string out_json = extend_opts.out_dir.empty() ? "extend_reports.json"
                                                       : extend_opts.out_dir + "/extend_reports.json";
    int failed = 0;
    muskat_status st = muskat_run_extend(h.cfg, out_json.c_str(), &failed);
    if (st == MUSKAT_OK)
      std::printf("extension residuals within tolerance, report: %s\n", out_json.c_str());
    else
      std::fprintf(stderr, "muskat-lab extend: %d failed (%s)\n", failed, muskat_last_error());
    return status_to_exit(st);
  }

  if (report->parsed()) {
    std::vector<char> buf(1 << 16);
    muskat_status st = muskat_run_report(report_dir.c_str(), buf.data(), buf.size());
    if (st != MUSKAT_OK) {
      std::fprintf(stderr, "muskat-lab report: %s\n", muskat_last_error());
      return status_to_exit(st);
    }
    std::printf("%s", buf.data());
    return 0;
  }
  return 1;
}
