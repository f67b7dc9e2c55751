#include "muskat.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "muskat/config.hpp"
#include "muskat/curve.hpp"
#include "muskat/io.hpp"
#include "muskat/scenario.hpp"
#include "muskat/verify.hpp"

struct muskat_config {
  muskat::ScenarioConfig cfg;
};

struct muskat_curve {
  muskat::PeriodicInterface curve;
};

namespace {

thread_local std::string g_last_error;

muskat_status to_status(const muskat::Error& e) {
  g_last_error = e.what();
  switch (e.kind()) {
    case muskat::ErrorKind::Validation:
      return MUSKAT_ERR_INVALID;
    case muskat::ErrorKind::Numerical:
      return MUSKAT_ERR_NUMERICAL;
    case muskat::ErrorKind::CheckFailed:
      return MUSKAT_ERR_CHECKS;
    default:
      return MUSKAT_ERR_IO;
  }
}

template <typename F>
muskat_status guarded(F&& body) {
  try {
    body();
    return MUSKAT_OK;
  } catch (const muskat::Error& e) {
    return to_status(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MUSKAT_ERR_NUMERICAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MUSKAT_ERR_NUMERICAL;
  }
}

muskat_status copy_out(const std::string& s, char* buf, size_t bufsize) {
  if (!buf || bufsize == 0) {
    g_last_error = "output buffer missing";
    return MUSKAT_ERR_INVALID;
  }
  const size_t n = std::min(bufsize - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
  if (n < s.size()) {
    g_last_error = "output truncated";
    return MUSKAT_ERR_INVALID;
  }
  return MUSKAT_OK;
}

}  // namespace

extern "C" {

const char* muskat_version(void) { return "muskat-lab 1.0.0"; }

const char* muskat_last_error(void) { return g_last_error.c_str(); }

muskat_config* muskat_config_create(void) { return new (std::nothrow) muskat_config(); }

muskat_status muskat_config_load(muskat_config* cfg, const char* path) {
  if (!cfg || !path) return MUSKAT_ERR_INVALID;
  return guarded([&] { cfg->cfg = muskat::load_config_file(path); });
}

muskat_status muskat_config_parse(muskat_config* cfg, const char* text) {
  if (!cfg || !text) return MUSKAT_ERR_INVALID;
  return guarded([&] { cfg->cfg = muskat::parse_config(text); });
}

muskat_status muskat_config_set(muskat_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return MUSKAT_ERR_INVALID;
  return guarded([&] {
    // reuse the parser: start from the current echo and override one key
    std::string text = cfg->cfg.to_text() + std::string(key) + " = " + value + "\n";
    cfg->cfg = muskat::parse_config(text);
  });
}

muskat_status muskat_config_text(const muskat_config* cfg, char* buf, size_t bufsize) {
  if (!cfg) return MUSKAT_ERR_INVALID;
  return copy_out(cfg->cfg.to_text(), buf, bufsize);
}

void muskat_config_free(muskat_config* cfg) { delete cfg; }

muskat_curve* muskat_curve_preset(const muskat_config* cfg) {
  if (!cfg) return nullptr;
  try {
    auto* c = new muskat_curve{muskat::initial_curve(cfg->cfg)};
    return c;
  } catch (const muskat::Error& e) {
    to_status(e);
    return nullptr;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

muskat_curve* muskat_curve_load_csv(const char* path, double rho_bar) {
  if (!path) return nullptr;
  try {
    return new muskat_curve{muskat::read_curve_csv(path, rho_bar)};
  } catch (const muskat::Error& e) {
    to_status(e);
    return nullptr;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

muskat_status muskat_curve_save_csv(const muskat_curve* curve, const char* path) {
  if (!curve || !path) return MUSKAT_ERR_INVALID;
  return guarded([&] { muskat::write_curve_csv(path, curve->curve); });
}

muskat_status muskat_curve_save_json(const muskat_curve* curve, const char* path) {
  if (!curve || !path) return MUSKAT_ERR_INVALID;
  return guarded([&] { muskat::write_curve_json(path, curve->curve); });
}

int muskat_curve_size(const muskat_curve* curve) { return curve ? curve->curve.n : 0; }

muskat_status muskat_curve_arc_chord(const muskat_curve* curve, double* out_sup) {
  if (!curve || !out_sup) return MUSKAT_ERR_INVALID;
  return guarded([&] { *out_sup = muskat::arc_chord_sup(curve->curve); });
}

muskat_status muskat_curve_rt_range(const muskat_curve* curve, double* out_min, double* out_max) {
  if (!curve || !out_min || !out_max) return MUSKAT_ERR_INVALID;
  return guarded([&] {
    std::vector<double> s = muskat::rt_coefficient(curve->curve);
    *out_min = *std::min_element(s.begin(), s.end());
    *out_max = *std::max_element(s.begin(), s.end());
  });
}

muskat_status muskat_curve_turnovers(const muskat_curve* curve, double* roots, int cap, int* out_count) {
  if (!curve || !out_count || (cap > 0 && !roots)) return MUSKAT_ERR_INVALID;
  return guarded([&] {
    muskat::TurnoverSet set = muskat::detect_turnovers(curve->curve);
    *out_count = set.count();
    for (int i = 0; i < std::min(cap, set.count()); ++i) roots[i] = set.roots[i].alpha;
  });
}

void muskat_curve_free(muskat_curve* curve) { delete curve; }

muskat_status muskat_run_scenario(const muskat_config* cfg, const char* out_dir) {
  if (!cfg) return MUSKAT_ERR_INVALID;
  return guarded([&] {
    muskat::ScenarioConfig c = cfg->cfg;
    if (out_dir && *out_dir) c.out_dir = out_dir;
    muskat::ScenarioResult res = muskat::run_scenario(c);
    if (!res.completed) throw muskat::NumericalError(res.failure);
  });
}

muskat_status muskat_run_verify(const muskat_config* cfg, const char* out_json, int* out_failed) {
  if (!cfg) return MUSKAT_ERR_INVALID;
  return guarded([&] {
    std::vector<muskat::CheckReport> reports = muskat::run_all_checks(cfg->cfg.n, cfg->cfg.seed);
    const int failed = muskat::count_failures(reports);
    if (out_failed) *out_failed = failed;
    if (out_json && *out_json) muskat::write_text_file(out_json, muskat::render_check_json(reports));
    if (failed > 0) throw muskat::CheckError(std::to_string(failed) + " verification checks failed");
  });
}

muskat_status muskat_run_extend(const muskat_config* cfg, const char* out_json, int* out_failed) {
  if (!cfg) return MUSKAT_ERR_INVALID;
  return guarded([&] {
    std::vector<muskat::ExtendReport> reports = muskat::run_extend(cfg->cfg);
    int failed = 0;
    for (const auto& r : reports)
      if (!r.pass) ++failed;
    if (out_failed) *out_failed = failed;
    if (out_json && *out_json)
      muskat::write_text_file(out_json, muskat::render_reports_json(reports, "extend"));
    if (failed > 0) throw muskat::CheckError(std::to_string(failed) + " extension checks failed");
  });
}

muskat_status muskat_run_report(const char* run_dir, char* buf, size_t bufsize) {
  if (!run_dir) return MUSKAT_ERR_INVALID;
  std::string summary;
  muskat_status st = guarded([&] { summary = muskat::summarize_run(run_dir); });
  if (st != MUSKAT_OK) return st;
  return copy_out(summary, buf, bufsize);
}

}  // extern "C"
