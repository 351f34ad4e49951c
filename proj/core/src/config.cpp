#include <fstream>
#include <sstream>

#include "vvlab/experiments.hpp"

namespace vvlab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& value, const std::string& key) {
  std::istringstream iss(value);
  std::vector<double> out;
  double v;
  while (iss >> v) out.push_back(v);
  std::string rest;
  if (iss.fail() && !iss.eof()) throw ConfigError("bad number list for key '" + key + "'");
  if (out.empty()) throw ConfigError("empty value for key '" + key + "'");
  return out;
}

double parse_one(const std::string& value, const std::string& key) {
  auto v = parse_numbers(value, key);
  if (v.size() != 1) throw ConfigError("key '" + key + "' expects one number");
  return v[0];
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("key '" + key + "' expects a boolean, got '" + value + "'");
}

struct CustomSystemSpec {
  int n = 0;
  std::vector<double> frame;
  std::map<int, std::vector<double>> lambda, mu;
  std::map<int, Interval> box;
  double c0 = 0.0, c1 = 0.0;
  std::vector<double> ustar;
  bool any = false;
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  CustomSystemSpec custom;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  int snapshot_count = 0;

  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section");
      section = s.substr(1, s.size() - 2);
      if (section != "system" && section != "ic" && section != "grid" && section != "time" &&
          section != "viscosity" && section != "cutoff" && section != "decomposition" &&
          section != "run")
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (section.empty()) throw ConfigError("key '" + key + "' outside any section");

    auto indexed = [&](const std::string& prefix) -> int {
      // key of the form prefixK, 1-based
      if (key.rfind(prefix, 0) != 0) return -1;
      std::string tail = key.substr(prefix.size());
      if (tail.empty()) return -1;
      for (char c : tail)
        if (!isdigit(static_cast<unsigned char>(c))) return -1;
      return std::stoi(tail);
    };

    if (section == "system") {
      if (key == "name") {
        cfg.system_name = value;
      } else if (key == "n") {
        custom.n = static_cast<int>(parse_one(value, key));
        custom.any = true;
      } else if (key == "frame") {
        custom.frame = parse_numbers(value, key);
        custom.any = true;
      } else if (key == "c0") {
        custom.c0 = parse_one(value, key);
        custom.any = true;
      } else if (key == "c1") {
        custom.c1 = parse_one(value, key);
        custom.any = true;
      } else if (key == "ustar") {
        custom.ustar = parse_numbers(value, key);
        custom.any = true;
      } else if (int i = indexed("lambda"); i > 0) {
        custom.lambda[i - 1] = parse_numbers(value, key);
        custom.any = true;
      } else if (int i = indexed("mu"); i > 0) {
        custom.mu[i - 1] = parse_numbers(value, key);
        custom.any = true;
      } else if (int i = indexed("box"); i > 0) {
        auto v = parse_numbers(value, key);
        if (v.size() != 2) throw ConfigError("box expects two numbers");
        custom.box[i - 1] = {v[0], v[1]};
        custom.any = true;
      } else {
        throw ConfigError("unknown key '" + key + "' in [system]");
      }
    } else if (section == "ic") {
      if (key == "kind")
        cfg.ic.kind = value;
      else if (key == "left")
        cfg.ic.left = to_vec(parse_numbers(value, key));
      else if (key == "right")
        cfg.ic.right = to_vec(parse_numbers(value, key));
      else if (key == "width")
        cfg.ic.width = parse_one(value, key);
      else if (key == "amplitude")
        cfg.ic.amplitude = to_vec(parse_numbers(value, key));
      else if (key == "gauss_width")
        cfg.ic.gauss_width = parse_one(value, key);
      else if (key == "center")
        cfg.ic.center = parse_one(value, key);
      else if (key == "file")
        cfg.ic.profile_file = value;
      else
        throw ConfigError("unknown key '" + key + "' in [ic]");
    } else if (section == "grid") {
      if (key == "xmin")
        cfg.xmin = parse_one(value, key);
      else if (key == "xmax")
        cfg.xmax = parse_one(value, key);
      else if (key == "M")
        cfg.M = static_cast<int>(parse_one(value, key));
      else
        throw ConfigError("unknown key '" + key + "' in [grid]");
    } else if (section == "time") {
      if (key == "t_end")
        cfg.t_end = parse_one(value, key);
      else if (key == "snapshots")
        cfg.snapshot_times = parse_numbers(value, key);
      else if (key == "snapshot_count")
        snapshot_count = static_cast<int>(parse_one(value, key));
      else
        throw ConfigError("unknown key '" + key + "' in [time]");
    } else if (section == "viscosity") {
      if (key == "eps")
        cfg.eps_list = parse_numbers(value, key);
      else
        throw ConfigError("unknown key '" + key + "' in [viscosity]");
    } else if (section == "cutoff") {
      if (key == "delta1")
        cfg.cutoff.delta1 = parse_one(value, key);
      else if (key == "N")
        cfg.cutoff.N = static_cast<int>(parse_one(value, key));
      else if (key == "epsilon_cut")
        cfg.cutoff.epsilon_cut = parse_one(value, key);
      else if (key == "v_floor")
        cfg.cutoff.v_floor = parse_one(value, key);
      else if (key == "newton_tol")
        cfg.cutoff.newton_tol = parse_one(value, key);
      else
        throw ConfigError("unknown key '" + key + "' in [cutoff]");
    } else if (section == "decomposition") {
      if (key == "mode") {
        if (value == "eigenbasis")
          cfg.mode = DecompositionMode::Eigenbasis;
        else if (value == "travelling1")
          cfg.mode = DecompositionMode::Travelling1;
        else
          throw ConfigError("mode must be eigenbasis or travelling1");
      } else {
        throw ConfigError("unknown key '" + key + "' in [decomposition]");
      }
    } else if (section == "run") {
      if (key == "out")
        cfg.out_dir = value;
      else if (key == "seed")
        cfg.seed = static_cast<unsigned long long>(parse_one(value, key));
      else if (key == "tv_guard")
        cfg.tv_guard = parse_one(value, key);
      else if (key == "conservative")
        cfg.conservative = parse_bool(value, key);
      else if (key == "force")
        cfg.force = parse_bool(value, key);
      else if (key == "cfl_advective")
        cfg.cfl_advective = parse_one(value, key);
      else if (key == "cfl_parabolic")
        cfg.cfl_parabolic = parse_one(value, key);
      else if (key == "hypothesis_samples")
        cfg.hypothesis_samples = static_cast<int>(parse_one(value, key));
      else
        throw ConfigError("unknown key '" + key + "' in [run]");
    }
  }

  if (snapshot_count > 0) {
    cfg.snapshot_times.clear();
    for (int k = 1; k <= snapshot_count; ++k)
      cfg.snapshot_times.push_back(cfg.t_end * k / snapshot_count);
  }

  if (cfg.system_name == "custom" || custom.any) {
    if (custom.n <= 0) throw ConfigError("custom system needs n");
    int n = custom.n;
    if (static_cast<int>(custom.frame.size()) != n * n)
      throw ConfigError("custom system frame needs n*n entries");
    Mat R(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) R(r, c) = custom.frame[r * n + c];
    std::vector<std::vector<double>> lam(n), mu(n);
    std::vector<Interval> box(n);
    for (int i = 0; i < n; ++i) {
      if (!custom.lambda.count(i)) throw ConfigError("missing lambda" + std::to_string(i + 1));
      if (!custom.mu.count(i)) throw ConfigError("missing mu" + std::to_string(i + 1));
      if (!custom.box.count(i)) throw ConfigError("missing box" + std::to_string(i + 1));
      lam[i] = custom.lambda[i];
      mu[i] = custom.mu[i];
      box[i] = custom.box[i];
    }
    if (custom.c0 <= 0.0 || custom.c1 <= 0.0) throw ConfigError("custom system needs c0, c1 > 0");
    Vec ustar = custom.ustar.empty() ? Vec(Vec::Zero(n)) : to_vec(custom.ustar);
    cfg.custom_system = make_shared_frame_system(
        cfg.system_name == "custom" ? "custom" : cfg.system_name, R, lam, mu, box, custom.c0,
        custom.c1, ustar);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace vvlab
