#include "vvlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vvlab {

namespace fs = std::filesystem;

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

constexpr const char* kVersion = "vvlab 0.1.0";

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string vec_str(const Vec& v) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_g17(v[i]);
  return s;
}

// Cheap eigenvalue-only bounds for the stability limit (no eigenvectors, no
// orientation work).
void spectral_bounds(const SystemModel& model, const Vec& u, double& max_abs_lambda,
                     double& max_mu) {
  Mat A = model.eval_A(u), B = model.eval_B(u);
  if (model.n == 1) {
    max_abs_lambda = std::abs(A(0, 0));
    max_mu = B(0, 0);
    return;
  }
  if (model.n == 2) {
    auto eig2 = [](const Mat& M2, double& lo, double& hi) {
      double tr = M2(0, 0) + M2(1, 1), det = M2(0, 0) * M2(1, 1) - M2(0, 1) * M2(1, 0);
      double disc = std::max(0.0, 0.25 * tr * tr - det);
      double s = std::sqrt(disc);
      lo = 0.5 * tr - s;
      hi = 0.5 * tr + s;
    };
    double lo, hi;
    eig2(A, lo, hi);
    max_abs_lambda = std::max(std::abs(lo), std::abs(hi));
    eig2(B, lo, hi);
    max_mu = hi;
    return;
  }
  Eigen::EigenSolver<Mat> esA(A, false), esB(B, false);
  max_abs_lambda = esA.eigenvalues().cwiseAbs().maxCoeff();
  max_mu = esB.eigenvalues().real().maxCoeff();
}

double dt_bound_fast(const SystemModel& model, const GridField& f, const SolverConfig& sc) {
  double max_lambda = 0.0, max_mu = 0.0;
  for (int j = 0; j < f.M; ++j) {
    double ml, mm;
    spectral_bounds(model, f.values.col(j), ml, mm);
    max_lambda = std::max(max_lambda, ml);
    max_mu = std::max(max_mu, mm);
  }
  double dt_par = sc.cfl_parabolic * f.h * f.h / (sc.epsilon * max_mu);
  if (max_lambda == 0.0) return dt_par;
  return std::min(sc.cfl_advective * f.h / max_lambda, dt_par);
}

}  // namespace

std::string ExperimentConfig::echo() const {
  std::ostringstream o;
  o << "[system]\nname = " << system_name << "\n";
  if (custom_system) {
    o << "n = " << custom_system->n << "\n";
    o << "c0 = " << format_g17(custom_system->c0_claimed) << "\n";
    o << "c1 = " << format_g17(custom_system->c1_claimed) << "\n";
    o << "ustar = " << vec_str(custom_system->u_star) << "\n";
  }
  o << "[ic]\nkind = " << ic.kind << "\n";
  if (ic.left.size()) o << "left = " << vec_str(ic.left) << "\n";
  if (ic.right.size()) o << "right = " << vec_str(ic.right) << "\n";
  if (ic.width > 0) o << "width = " << format_g17(ic.width) << "\n";
  if (ic.amplitude.size()) {
    o << "amplitude = " << vec_str(ic.amplitude) << "\n";
    o << "gauss_width = " << format_g17(ic.gauss_width) << "\n";
    o << "center = " << format_g17(ic.center) << "\n";
  }
  if (!ic.profile_file.empty()) o << "file = " << ic.profile_file << "\n";
  o << "[grid]\nxmin = " << format_g17(xmin) << "\nxmax = " << format_g17(xmax)
    << "\nM = " << M << "\n";
  o << "[time]\nt_end = " << format_g17(t_end) << "\n";
  if (!snapshot_times.empty()) {
    o << "snapshots =";
    for (double t : snapshot_times) o << " " << format_g17(t);
    o << "\n";
  }
  o << "[viscosity]\neps =";
  for (double e : eps_list) o << " " << format_g17(e);
  o << "\n";
  o << "[cutoff]\ndelta1 = " << format_g17(cutoff.delta1) << "\nN = " << cutoff.N
    << "\nepsilon_cut = " << format_g17(cutoff.epsilon_cut)
    << "\nv_floor = " << format_g17(cutoff.v_floor)
    << "\nnewton_tol = " << format_g17(cutoff.newton_tol) << "\n";
  o << "[decomposition]\nmode = "
    << (mode == DecompositionMode::Eigenbasis ? "eigenbasis" : "travelling1") << "\n";
  o << "[run]\nseed = " << seed << "\ntv_guard = " << format_g17(tv_guard)
    << "\nconservative = " << (conservative ? "true" : "false")
    << "\nforce = " << (force ? "true" : "false")
    << "\ncfl_advective = " << format_g17(cfl_advective)
    << "\ncfl_parabolic = " << format_g17(cfl_parabolic) << "\n";
  return o.str();
}

uint64_t ExperimentConfig::hash() const { return fnv1a(echo()); }

SystemModel resolve_system(const ExperimentConfig& cfg) {
  if (cfg.custom_system) return *cfg.custom_system;
  return builtin_system(cfg.system_name);
}

GridField build_initial_condition(const SystemModel& model, const ExperimentConfig& cfg) {
  GridField f;
  f.M = cfg.M;
  f.h = (cfg.xmax - cfg.xmin) / cfg.M;
  f.x0 = cfg.xmin + 0.5 * f.h;  // cell centers
  f.boundary = Boundary::ConstantExtrapolation;
  f.time = 0.0;
  f.values.resize(model.n, cfg.M);

  const InitialCondition& ic = cfg.ic;
  if (ic.kind == "riemann") {
    if (ic.left.size() != model.n || ic.right.size() != model.n)
      throw ConfigError("riemann ic needs n-vector left/right");
    double w = ic.width > 0 ? ic.width : 4.0 * f.h;
    for (int j = 0; j < cfg.M; ++j) {
      double ramp = 0.5 * (1.0 + std::tanh((f.x(j) - ic.center) / w));
      f.values.col(j) = ic.left + ramp * (ic.right - ic.left);
    }
  } else if (ic.kind == "gaussian") {
    Vec amp = ic.amplitude.size() == model.n ? ic.amplitude
                                             : Vec(Vec::Zero(model.n));
    if (ic.amplitude.size() && ic.amplitude.size() != model.n)
      throw ConfigError("gaussian ic amplitude needs n entries");
    for (int j = 0; j < cfg.M; ++j) {
      double g = std::exp(-0.5 * std::pow((f.x(j) - ic.center) / ic.gauss_width, 2));
      f.values.col(j) = model.u_star + g * amp;
    }
  } else if (ic.kind == "constant") {
    Vec state = ic.left.size() == model.n ? ic.left : model.u_star;
    for (int j = 0; j < cfg.M; ++j) f.values.col(j) = state;
  } else if (ic.kind == "profile") {
    GridField loaded = read_snapshot(ic.profile_file);
    if (loaded.n() != model.n) throw ConfigError("profile file dimension mismatch");
    return loaded;
  } else {
    throw ConfigError("unknown ic kind '" + ic.kind + "'");
  }
  return f;
}

HypothesisReport hypothesis_gate(const ExperimentConfig& cfg) {
  SystemModel model = resolve_system(cfg);
  int spa = cfg.hypothesis_samples;
  if (spa <= 0) spa = model.n == 1 ? 101 : (model.n == 2 ? 33 : 11);
  HypothesisReport rep = check_hypotheses(model, spa);

  GridField ic = build_initial_condition(model, cfg);
  double tv0 = tv(ic).total;
  bool data_ok = tv0 <= cfg.tv_guard;

  if ((!rep.pass() || !data_ok) && !cfg.force) {
    std::string why = !rep.pass() ? "hypothesis check failed" : "TV(u0) exceeds guard";
    throw HypothesisFailed(why + " (TV = " + format_g17(tv0) +
                           ", guard = " + format_g17(cfg.tv_guard) + ")");
  }
  return rep;
}

void write_snapshot(const GridField& field, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << "x";
  for (int c = 0; c < field.n(); ++c) f << ",u" << (c + 1);
  f << "\n";
  for (int j = 0; j < field.M; ++j) {
    f << format_g17(field.x(j));
    for (int c = 0; c < field.n(); ++c) f << "," << format_g17(field.values(c, j));
    f << "\n";
  }
}

GridField read_snapshot(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read " + path);
  std::string line;
  if (!std::getline(f, line)) throw Error("empty snapshot " + path);
  int n = static_cast<int>(std::count(line.begin(), line.end(), ',')) ;
  if (n < 1) throw Error("bad snapshot header in " + path);
  std::vector<double> xs;
  std::vector<std::vector<double>> cols(n);
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream iss(line);
    double x;
    iss >> x;
    xs.push_back(x);
    for (int c = 0; c < n; ++c) {
      double v;
      iss >> v;
      cols[c].push_back(v);
    }
    if (iss.fail()) throw Error("bad snapshot row in " + path);
  }
  if (xs.size() < 2) throw Error("snapshot too short: " + path);
  GridField g;
  g.M = static_cast<int>(xs.size());
  g.x0 = xs[0];
  g.h = xs[1] - xs[0];
  g.values.resize(n, g.M);
  for (int c = 0; c < n; ++c)
    for (int j = 0; j < g.M; ++j) g.values(c, j) = cols[c][j];
  return g;
}

void write_components_csv(const WaveComponents& comps, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  const int n = comps.n();
  f << "x";
  auto cols = [&](const char* base) {
    for (int i = 0; i < n; ++i) f << "," << base << (i + 1);
  };
  cols("v");
  cols("w");
  cols("sigma");
  cols("z");
  cols("zhat");
  f << ",recon_residual\n";
  for (int j = 0; j < comps.M(); ++j) {
    f << format_g17(comps.x0 + j * comps.h);
    auto row = [&](const Mat& m) {
      for (int i = 0; i < n; ++i) f << "," << format_g17(m(i, j));
    };
    row(comps.v);
    row(comps.w);
    row(comps.sigma);
    row(comps.z);
    row(comps.zhat);
    f << "," << format_g17(comps.recon_residual[j]) << "\n";
  }
}

RunResult run_single(const SystemModel& model, const ExperimentConfig& cfg, double eps,
                     const std::string& sub) {
  SolverConfig sc;
  sc.cfl_advective = cfg.cfl_advective;
  sc.cfl_parabolic = cfg.cfl_parabolic;
  sc.epsilon = eps;
  sc.t_end = cfg.t_end;
  sc.conservative = cfg.conservative && model.eval_flux.has_value();

  GridField u = build_initial_condition(model, cfg);

  std::vector<double> targets = cfg.snapshot_times;
  if (targets.empty()) targets.push_back(cfg.t_end);
  std::sort(targets.begin(), targets.end());
  for (double t : targets)
    if (t <= 0.0 || t > cfg.t_end + 1e-12) throw ConfigError("snapshot times must lie in (0, t_end]");

  RunResult run;
  run.epsilon = eps;
  run.times.push_back(0.0);
  run.snapshots.push_back(u);

  size_t next = 0;
  double dt_cache = 0.0;
  int steps_since = 0;
  const int kDtStride = 8;
  while (next < targets.size()) {
    if (steps_since == 0) dt_cache = 0.9 * dt_bound_fast(model, u, sc);
    steps_since = (steps_since + 1) % kDtStride;
    double dt = dt_cache;
    bool hit = false;
    if (u.time + dt >= targets[next] - 1e-14) {
      dt = targets[next] - u.time;
      hit = true;
      steps_since = 0;
    }
    u = step(model, u, sc, dt);
    if (hit) {
      u.time = targets[next];  // exact stamp, avoids roundoff drift
      run.times.push_back(u.time);
      run.snapshots.push_back(u);
      ++next;
    }
  }

  if (!cfg.out_dir.empty()) {
    fs::path dir = fs::path(cfg.out_dir);
    if (!sub.empty()) dir /= sub;
    fs::create_directories(dir);
    run.dir = dir.string();

    std::ofstream manifest(dir / "manifest.txt");
    manifest << "version = " << kVersion << "\n";
    manifest << "config_hash = " << cfg.hash() << "\n";
    manifest << "epsilon_run = " << format_g17(eps) << "\n";
    manifest << cfg.echo();

    std::ofstream times(dir / "times.csv");
    times << "index,t,file\n";
    for (size_t k = 0; k < run.snapshots.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%04zu.csv", k);
      write_snapshot(run.snapshots[k], (dir / name).string());
      times << k << "," << format_g17(run.times[k]) << "," << name << "\n";
    }

    std::ofstream rep(dir / "tv_series.csv");
    rep << "t,tv_total\n";
    for (size_t k = 0; k < run.snapshots.size(); ++k)
      rep << format_g17(run.times[k]) << "," << format_g17(tv(run.snapshots[k]).total) << "\n";
  }
  return run;
}

RunResult run_simulation(const ExperimentConfig& cfg) {
  hypothesis_gate(cfg);
  SystemModel model = resolve_system(cfg);
  return run_single(model, cfg, cfg.eps_list.front(), "");
}

RunResult load_run(const std::string& dir) {
  fs::path d(dir);
  std::ifstream times(d / "times.csv");
  if (!times) throw Error("cannot read " + (d / "times.csv").string());
  std::string line;
  std::getline(times, line);  // header
  RunResult run;
  run.dir = dir;
  while (std::getline(times, line)) {
    if (line.empty()) continue;
    std::istringstream iss(line);
    std::string idx, t, file;
    std::getline(iss, idx, ',');
    std::getline(iss, t, ',');
    std::getline(iss, file, ',');
    run.times.push_back(std::stod(t));
    GridField g = read_snapshot((d / file).string());
    g.time = run.times.back();
    run.snapshots.push_back(g);
  }
  std::ifstream manifest(d / "manifest.txt");
  while (std::getline(manifest, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    if (key.find("epsilon_run") != std::string::npos)
      run.epsilon = std::stod(line.substr(eq + 1));
  }
  return run;
}

SlopeFit smoothing_check(const RunResult& run, int k, double t_lo, double t_hi) {
  if (k < 1 || k > 3) throw Error("smoothing_check: k in {1,2,3}");
  double tmin = run.times.front(), tmax = run.times.back();
  if (t_lo < 0) t_lo = tmin + 0.1 * (tmax - tmin);
  if (t_hi < 0) t_hi = tmax - 0.1 * (tmax - tmin);

  std::vector<double> lt, ln;
  for (size_t s = 0; s < run.snapshots.size(); ++s) {
    double t = run.times[s];
    if (t < t_lo - 1e-14 || t > t_hi + 1e-14 || t <= 0.0) continue;
    GridField ux = derivative(run.snapshots[s], 1);
    GridField dk = derivative(ux, k);
    double norm = l1_norm(dk).total;
    if (norm <= 0.0) continue;
    lt.push_back(std::log(t));
    ln.push_back(std::log(norm));
  }
  if (lt.size() < 5) throw InsufficientWindow("only " + std::to_string(lt.size()) +
                                              " snapshots in window");
  if (std::exp(lt.back() - lt.front()) < 5.0)
    throw InsufficientWindow("window spans less than half a decade");

  double n = static_cast<double>(lt.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < lt.size(); ++i) {
    sx += lt[i];
    sy += ln[i];
    sxx += lt[i] * lt[i];
    sxy += lt[i] * ln[i];
  }
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points = static_cast<int>(lt.size());
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  return fit;
}

BvReport bv_check(const RunResult& run, double guard) {
  BvReport rep;
  rep.guard = guard;
  double tv0 = tv(run.snapshots.front()).total;
  for (const auto& snap : run.snapshots) {
    double r = tv0 > 0 ? tv(snap).total / tv0 : 1.0;
    rep.ratio.push_back(r);
    rep.max_ratio = std::max(rep.max_ratio, r);
  }
  rep.flagged = rep.max_ratio > guard;
  return rep;
}

L1ContinuityFit l1_continuity_fit(const RunResult& run) {
  std::vector<double> d, a, b;
  const size_t S = run.snapshots.size();
  for (size_t i = 0; i < S; ++i) {
    for (size_t j = i + 1; j < S; ++j) {
      d.push_back(l1_distance(run.snapshots[i], run.snapshots[j]));
      a.push_back(std::abs(run.times[j] - run.times[i]));
      b.push_back(std::sqrt(run.epsilon) *
                  std::abs(std::sqrt(run.times[j]) - std::sqrt(run.times[i])));
    }
  }
  if (d.size() < 6) throw InsufficientWindow("need >= 6 snapshot pairs");

  double aa = 0, ab = 0, bb = 0, ad = 0, bd = 0;
  for (size_t p = 0; p < d.size(); ++p) {
    aa += a[p] * a[p];
    ab += a[p] * b[p];
    bb += b[p] * b[p];
    ad += a[p] * d[p];
    bd += b[p] * d[p];
  }
  double det = aa * bb - ab * ab;
  double ca = 0.0, cb = 0.0;
  if (det > 1e-300) {
    ca = (bb * ad - ab * bd) / det;
    cb = (aa * bd - ab * ad) / det;
  }
  auto residual = [&](double x, double y) {
    double r = 0;
    for (size_t p = 0; p < d.size(); ++p) {
      double e = d[p] - x * a[p] - y * b[p];
      r += e * e;
    }
    return r;
  };
  if (ca < 0 || cb < 0) {
    double ca1 = aa > 0 ? std::max(0.0, ad / aa) : 0.0;  // b coefficient zero
    double cb1 = bb > 0 ? std::max(0.0, bd / bb) : 0.0;  // a coefficient zero
    ca = residual(ca1, 0.0) <= residual(0.0, cb1) ? ca1 : 0.0;
    cb = ca > 0 ? 0.0 : cb1;
  }
  // scale so the bound holds for every pair
  double scale = 1.0;
  for (size_t p = 0; p < d.size(); ++p) {
    double pred = ca * a[p] + cb * b[p];
    if (d[p] > 1e-300 && pred > 1e-300) scale = std::max(scale, d[p] / pred);
  }
  L1ContinuityFit fit;
  fit.L2a = ca * scale;
  fit.L2b = cb * scale;
  fit.pairs = static_cast<int>(d.size());
  return fit;
}

EpsSweepResult eps_sweep(const ExperimentConfig& cfg) {
  if (cfg.eps_list.size() < 3) throw Error("eps_sweep: need >= 3 epsilon values");
  for (size_t i = 0; i + 1 < cfg.eps_list.size(); ++i)
    if (cfg.eps_list[i + 1] >= cfg.eps_list[i])
      throw Error("eps_sweep: epsilon list must be strictly decreasing");
  SystemModel model = resolve_system(cfg);
  if (!model.eval_flux) throw NoFlux("eps_sweep needs a conservative system");
  double h = (cfg.xmax - cfg.xmin) / cfg.M;
  double eps_min = cfg.eps_list.back();
  if (h > eps_min / 8.0 + 1e-15)
    throw GridTooCoarse("h = " + format_g17(h) + " > eps_min/8 = " + format_g17(eps_min / 8.0));

  EpsSweepResult out;
  for (double eps : cfg.eps_list) {
    char sub[32];
    std::snprintf(sub, sizeof sub, "eps_%g", eps);
    out.eps.push_back(eps);
    out.runs.push_back(run_single(model, cfg, eps, sub));
  }
  for (size_t m = 0; m + 1 < out.runs.size(); ++m)
    out.d.push_back(
        l1_distance(out.runs[m].snapshots.back(), out.runs[m + 1].snapshots.back()));
  for (size_t m = 0; m + 1 < out.d.size(); ++m)
    out.ratios.push_back(out.d[m] == 0.0 ? 0.0 : out.d[m + 1] / out.d[m]);

  // Compare the finest run against the translated viscous profile when the
  // data is an admissible scalar Riemann pair.
  if (model.n == 1 && cfg.ic.kind == "riemann" && model.eval_flux) {
    double ul = cfg.ic.left[0], ur = cfg.ic.right[0];
    if (ul != ur && oleinik_admissible(*model.eval_flux, ul, ur)) {
      RHSpeed rh = rh_speed(model, cfg.ic.left, cfg.ic.right);
      TravellingWaveProfile prof =
          profile_conservative(model, cfg.ic.left, cfg.ic.right, rh.sigma, 40.0, 4001);
      out.profile_distance =
          profile_l1_distance(out.runs.back().snapshots.back(), prof, out.eps.back());
    }
  }
  return out;
}

double burgers_rarefaction_sup_distance(const GridField& field, double u_left, double u_right,
                                        double T, double window) {
  double lo = std::min(u_left, u_right), hi = std::max(u_left, u_right);
  double worst = 0.0;
  for (int j = 0; j < field.M; ++j) {
    double s = field.x(j) / T;
    if (std::abs(s) > window) continue;
    double exact = std::clamp(s, lo, hi);
    worst = std::max(worst, std::abs(field.values(0, j) - exact));
  }
  return worst;
}

double profile_l1_distance(const GridField& field, const TravellingWaveProfile& profile,
                           double eps) {
  // locate the mid-value crossing of the (monotone) numeric solution
  double mid = 0.5 * (profile.u_minus[0] + profile.u_plus[0]);
  double shift = field.x(0);
  bool found = false;
  for (int j = 0; j + 1 < field.M; ++j) {
    double a = field.values(0, j) - mid, b = field.values(0, j + 1) - mid;
    if (a == 0.0) {
      shift = field.x(j);
      found = true;
      break;
    }
    if (a * b < 0.0) {
      shift = field.x(j) + field.h * a / (a - b);
      found = true;
      break;
    }
  }
  if (!found) shift = 0.5 * (field.x(0) + field.x(field.M - 1));

  auto eval_profile = [&](double xi) {
    const auto& grid = profile.xi_grid;
    if (xi <= grid.front()) return profile.u_minus[0];
    if (xi >= grid.back()) return profile.u_plus[0];
    double pos = (xi - grid.front()) / (grid[1] - grid[0]);
    int j = std::min(static_cast<int>(pos), static_cast<int>(grid.size()) - 2);
    double t = pos - j;
    return (1.0 - t) * profile.U(0, j) + t * profile.U(0, j + 1);
  };

  double acc = 0.0;
  for (int j = 0; j < field.M; ++j)
    acc += std::abs(field.values(0, j) - eval_profile((field.x(j) - shift) / eps));
  return field.h * acc;
}

ReportTable diagnose_run(const SystemModel& model, const RunResult& run,
                         const ExperimentConfig& cfg) {
  const int n = model.n;
  ReportTable table;
  auto col = [&](const std::string& name) { table.columns.push_back(name); };
  col("t");
  col("tv_total");
  for (int i = 1; i <= n; ++i) col("tv_" + std::to_string(i));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) col("Q_" + std::to_string(i) + "_" + std::to_string(j));
  for (int i = 1; i <= n; ++i) col("A_" + std::to_string(i));
  for (int i = 1; i <= n; ++i) col("L_" + std::to_string(i));
  for (int i = 1; i <= n; ++i) col("Ev_" + std::to_string(i));
  for (int i = 1; i <= n; ++i) col("Ew_" + std::to_string(i));
  const char* lam_names[] = {"Lam1", "Lam2", "Lam3", "Lam4", "Lam5", "Lam6", "Lam61",
                             "Lam7", "Lam8"};
  for (const char* base : lam_names)
    for (int i = 1; i <= n; ++i) col(std::string(base) + "_" + std::to_string(i));
  col("diss_Q_pass");
  col("diss_A_pass");

  // decompose all snapshots once
  std::vector<WaveComponents> comps;
  comps.reserve(run.snapshots.size());
  for (const auto& snap : run.snapshots) {
    GridField ut = compute_ut(model, snap, run.epsilon,
                              cfg.conservative && model.eval_flux.has_value());
    WaveComponents c = decompose_field(model, snap, ut, cfg.cutoff, cfg.mode);
    effective_fluxes(c, model, snap, cfg.cutoff);
    comps.push_back(std::move(c));
  }

  for (size_t k = 0; k < run.snapshots.size(); ++k) {
    std::vector<double> row;
    const auto& snap = run.snapshots[k];
    const auto& c = comps[k];
    row.push_back(run.times[k]);
    TotalVariation tvr = tv(snap);
    row.push_back(tvr.total);
    for (int i = 0; i < n; ++i) row.push_back(tvr.per_component[i]);

    const bool quad_ok = snap.M <= 4096;  // O(M^2) functionals capped
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double sup_slow = c.lambda_tilde.row(i).maxCoeff();
        double inf_fast = c.lambda_tilde.row(j).minCoeff();
        GridField mui = c.component(c.mu, i), muj = c.component(c.mu, j);
        double mux = std::max(derivative(mui, 1).values.cwiseAbs().maxCoeff(),
                              derivative(muj, 1).values.cwiseAbs().maxCoeff());
        double gap = inf_fast - sup_slow - 2.0 * mux;
        if (gap > 0 && quad_ok) {
          row.push_back(transversal_q(c.component(c.v, i), c.component(c.v, j), gap,
                                      std::max(c.mu.row(i).maxCoeff(), c.mu.row(j).maxCoeff())));
        } else {
          row.push_back(std::numeric_limits<double>::quiet_NaN());
        }
      }
    }
    for (int i = 0; i < n; ++i)
      row.push_back(quad_ok
                        ? area_functional(c.component(c.v, i), c.component(c.w, i))
                        : std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < n; ++i)
      row.push_back(length_functional(c.component(c.v, i), c.component(c.w, i)));
    EnergyFunctionals ef = energy_functionals(c, cfg.cutoff);
    for (int i = 0; i < n; ++i) row.push_back(ef.e_v[i]);
    for (int i = 0; i < n; ++i) row.push_back(ef.e_w[i]);
    LambdaTerms lt = lambda_terms(c, cfg.cutoff);
    const Vec* lam_norms[] = {&lt.n1, &lt.n2, &lt.n3, &lt.n4, &lt.n5, &lt.n6, &lt.n61,
                              &lt.n7, &lt.n8};
    for (const Vec* v : lam_norms)
      for (int i = 0; i < n; ++i) row.push_back((*v)[i]);

    // dissipation flags over the step [t_k, t_{k+1}] at the reported snapshot
    double q_pass = 1.0, a_pass = 1.0;
    if (k + 1 < run.snapshots.size() && quad_ok) {
      DiagonalResiduals res = diagonal_residuals(
          model, {comps[k], comps[k + 1]}, {run.times[k], run.times[k + 1]}, cfg.cutoff);
      for (int i = 0; i < n && a_pass > 0; ++i) {
        AreaSnapshot s0{run.times[k], comps[k].component(comps[k].v, i),
                        comps[k].component(comps[k].w, i), comps[k].component(comps[k].mu, i),
                        comps[k].component(res.phi, i), comps[k].component(res.psi, i)};
        AreaSnapshot s1{run.times[k + 1], comps[k + 1].component(comps[k + 1].v, i),
                        comps[k + 1].component(comps[k + 1].w, i),
                        comps[k + 1].component(comps[k + 1].mu, i),
                        comps[k + 1].component(res.phi, i), comps[k + 1].component(res.psi, i)};
        DissipationSeries ds = area_dissipation_check({s0, s1});
        if (ds.pass_fraction < 1.0) a_pass = 0.0;
      }
      for (int i = 0; i < n && q_pass > 0; ++i) {
        for (int j = i + 1; j < n && q_pass > 0; ++j) {
          try {
            TransversalSnapshot s0{run.times[k],
                                   comps[k].component(comps[k].v, i),
                                   comps[k].component(comps[k].v, j),
                                   comps[k].component(comps[k].lambda_tilde, i),
                                   comps[k].component(comps[k].lambda_tilde, j),
                                   comps[k].component(comps[k].mu, i),
                                   comps[k].component(comps[k].mu, j),
                                   comps[k].component(res.phi, i),
                                   comps[k].component(res.phi, j)};
            TransversalSnapshot s1 = s0;
            s1.t = run.times[k + 1];
            s1.z = comps[k + 1].component(comps[k + 1].v, i);
            s1.z_sharp = comps[k + 1].component(comps[k + 1].v, j);
            DissipationSeries ds = transversal_dissipation_check({s0, s1});
            if (ds.pass_fraction < 1.0) q_pass = 0.0;
          } catch (const GapViolated&) {
            q_pass = 0.0;
          }
        }
      }
    }
    row.push_back(q_pass);
    row.push_back(a_pass);
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_report_csv(const ReportTable& table, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  for (size_t c = 0; c < table.columns.size(); ++c)
    f << (c ? "," : "") << table.columns[c];
  f << "\n";
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) f << (c ? "," : "") << format_g17(row[c]);
    f << "\n";
  }
}

}  // namespace vvlab
