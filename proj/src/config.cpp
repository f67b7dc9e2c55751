#include "muskat/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "muskat/errors.hpp"

namespace muskat {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

double parse_num(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ValidationError("config: field '" + key + "' expects a number, got '" + v + "'");
  }
}

long parse_int(const std::string& key, const std::string& v) {
  const double x = parse_num(key, v);
  if (x != std::floor(x)) throw ValidationError("config: field '" + key + "' expects an integer");
  return static_cast<long>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ValidationError("config: field '" + key + "' expects on/off");
}

}  // namespace

void ScenarioConfig::validate() const {
  if (preset != "stable" && preset != "backward" && preset != "turnover" && preset != "custom")
    throw ValidationError("config: preset must be stable|backward|turnover|custom");
  if (!is_pow2(n) || n < 64 || n > 4096)
    throw ValidationError("config: n must be a power of two in [64, 4096]");
  if (!(t_end > 0.0)) throw ValidationError("config: t_end must be positive");
  if (dt_override < 0.0) throw ValidationError("config: dt must be nonnegative");
  if (!(delta > 0.0) || !(delta_c > 0.0)) throw ValidationError("config: delta, delta_c must be positive");
  if (!(eps > 0.0) || eps > 1.0) throw ValidationError("config: eps must lie in (0, 1]");
  if (m < 1 || m > 4) throw ValidationError("config: m must lie in [1, 4]");
  if (gamma_nodes < 5 || gamma_nodes % 2 == 0)
    throw ValidationError("config: gamma_nodes must be odd and >= 5");
  if (output_every < 1) throw ValidationError("config: output_every must be >= 1");
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0) throw ValidationError("config: cfl_safety in (0, 1]");
  if (!(amplitude > 0.0)) throw ValidationError("config: amplitude must be positive");
  if (!(tol_residual > 0.0)) throw ValidationError("config: tol_residual must be positive");
  if (preset == "custom" && curve_csv.empty())
    throw ValidationError("config: preset=custom requires curve_csv");
}

std::string ScenarioConfig::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "preset = " << preset << "\n";
  os << "n = " << n << "\n";
  os << "dt = " << dt_override << "\n";
  os << "t_end = " << t_end << "\n";
  os << "rho_bar = " << rho_bar << "\n";
  os << "delta = " << delta << "\n";
  os << "delta_c = " << delta_c << "\n";
  os << "eps = " << eps << "\n";
  os << "m = " << m << "\n";
  os << "gamma_nodes = " << gamma_nodes << "\n";
  os << "output_every = " << output_every << "\n";
  os << "out_dir = " << out_dir << "\n";
  os << "seed = " << seed << "\n";
  os << "dealias = " << (dealias ? "on" : "off") << "\n";
  os << "amplitude = " << amplitude << "\n";
  os << "cfl_safety = " << cfl_safety << "\n";
  os << "tol_residual = " << tol_residual << "\n";
  if (!curve_csv.empty()) os << "curve_csv = " << curve_csv << "\n";
  return os.str();
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // section headers are cosmetic
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config: expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    const std::size_t dot = key.rfind('.');
    if (dot != std::string::npos) key = key.substr(dot + 1);

    if (key == "preset")
      cfg.preset = val;
    else if (key == "n")
      cfg.n = static_cast<int>(parse_int(key, val));
    else if (key == "dt")
      cfg.dt_override = parse_num(key, val);
    else if (key == "t_end")
      cfg.t_end = parse_num(key, val);
    else if (key == "rho_bar")
      cfg.rho_bar = parse_num(key, val);
    else if (key == "delta")
      cfg.delta = parse_num(key, val);
    else if (key == "delta_c")
      cfg.delta_c = parse_num(key, val);
    else if (key == "eps")
      cfg.eps = parse_num(key, val);
    else if (key == "m")
      cfg.m = static_cast<int>(parse_int(key, val));
    else if (key == "gamma_nodes")
      cfg.gamma_nodes = static_cast<int>(parse_int(key, val));
    else if (key == "output_every")
      cfg.output_every = static_cast<int>(parse_int(key, val));
    else if (key == "out_dir")
      cfg.out_dir = val;
    else if (key == "seed")
      cfg.seed = static_cast<unsigned long>(parse_int(key, val));
    else if (key == "dealias")
      cfg.dealias = parse_bool(key, val);
    else if (key == "amplitude")
      cfg.amplitude = parse_num(key, val);
    else if (key == "cfl_safety")
      cfg.cfl_safety = parse_num(key, val);
    else if (key == "tol_residual")
      cfg.tol_residual = parse_num(key, val);
    else if (key == "curve_csv")
      cfg.curve_csv = val;
    else
      throw ValidationError("config: unknown field '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace muskat
