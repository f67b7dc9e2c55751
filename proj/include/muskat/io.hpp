#pragma once

#include <string>
#include <vector>

#include "muskat/curve.hpp"

namespace muskat {

// curve CSV: header "alpha,f1,f2", one row per node
void write_curve_csv(const std::string& path, const PeriodicInterface& curve);
PeriodicInterface read_curve_csv(const std::string& path, double rho_bar);

// curve JSON: { "n": ..., "rho_bar": ..., "alpha": [...], "f1": [...], "f2": [...] }
void write_curve_json(const std::string& path, const PeriodicInterface& curve);
PeriodicInterface read_curve_json(const std::string& path);

// spectrum CSV: header "k,re,im,abs"
void write_spectrum_csv(const std::string& path, const Spectrum& s);

// plain CSV table writer, widest double precision
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// manifest.json: canonical config echo plus its git-style content hash; written
// before any compute so a run is reproducible from the manifest alone.
void write_manifest(const std::string& out_dir, const std::string& config_text);

}  // namespace muskat
