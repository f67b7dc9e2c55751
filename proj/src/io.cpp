#include "muskat/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "muskat/errors.hpp"
#include "muskat/util.hpp"

namespace muskat {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_curve_csv(const std::string& path, const PeriodicInterface& curve) {
  std::ostringstream os;
  os << "alpha,f1,f2\n";
  for (int i = 0; i < curve.n; ++i)
    os << fmt(curve.alpha[i]) << ',' << fmt(curve.f1[i]) << ',' << fmt(curve.f2[i]) << '\n';
  write_text_file(path, os.str());
}

PeriodicInterface read_curve_csv(const std::string& path, double rho_bar) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty curve CSV '" + path + "'");
  std::vector<double> f1, f2;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double vals[3];
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(row, cell, ',')) throw IoError("malformed curve CSV row: '" + line + "'");
      vals[c] = std::stod(cell);
    }
    f1.push_back(vals[1]);
    f2.push_back(vals[2]);
  }
  return PeriodicInterface(std::move(f1), std::move(f2), rho_bar);
}

void write_curve_json(const std::string& path, const PeriodicInterface& curve) {
  nlohmann::json j;
  j["n"] = curve.n;
  j["rho_bar"] = curve.rho_bar;
  j["alpha"] = curve.alpha;
  j["f1"] = curve.f1;
  j["f2"] = curve.f2;
  write_text_file(path, j.dump(2) + "\n");
}

PeriodicInterface read_curve_json(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path));
  std::vector<double> f1 = j.at("f1").get<std::vector<double>>();
  std::vector<double> f2 = j.at("f2").get<std::vector<double>>();
  return PeriodicInterface(std::move(f1), std::move(f2), j.at("rho_bar").get<double>());
}

void write_spectrum_csv(const std::string& path, const Spectrum& s) {
  std::ostringstream os;
  os << "k,re,im,abs\n";
  for (int k = -s.n / 2 + 1; k <= s.n / 2; ++k) {
    const cplx c = s.at_mode(k == s.n / 2 ? s.n / 2 : k);
    os << k << ',' << fmt(c.real()) << ',' << fmt(c.imag()) << ',' << fmt(std::abs(c)) << '\n';
  }
  write_text_file(path, os.str());
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) os << columns[c] << (c + 1 < columns.size() ? "," : "");
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw IoError("write_csv: row width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) os << fmt(row[c]) << (c + 1 < row.size() ? "," : "");
    os << '\n';
  }
  write_text_file(path, os.str());
}

void write_manifest(const std::string& out_dir, const std::string& config_text) {
  nlohmann::json j;
  j["config"] = config_text;
  j["config_sha1"] = git_blob_sha1(config_text);
  j["format"] = "muskat-lab run manifest v1";
  write_text_file(out_dir + "/manifest.json", j.dump(2) + "\n");
}

}  // namespace muskat
