#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vvlab/experiments.hpp"

using namespace vvlab;

namespace {

struct CommonFlags {
  std::string config_file;
  std::string system;
  std::vector<double> eps;
  std::string ic;
  std::vector<double> ic_left, ic_right, ic_amplitude;
  double ic_width = 0.0, ic_gauss_width = 0.0, ic_center = 0.0;
  std::string ic_file;
  double xmin = 0.0, xmax = 0.0;
  int M = 0;
  double tend = 0.0;
  std::vector<double> snapshots;
  std::string mode;
  std::string out;
  bool conservative = false;
  bool force = false;
  double tv_guard = 0.0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_file, "config file (key = value with [section] headers)");
  cmd->add_option("--system", f.system, "system name (burgers, heat, decoupled2, shared_frame2, shared_frame3)");
  cmd->add_option("--eps", f.eps, "viscosity scale(s)");
  cmd->add_option("--ic", f.ic, "initial condition kind (riemann, gaussian, constant, profile)");
  cmd->add_option("--uleft", f.ic_left, "riemann left state");
  cmd->add_option("--uright", f.ic_right, "riemann right state");
  cmd->add_option("--amplitude", f.ic_amplitude, "gaussian amplitudes");
  cmd->add_option("--width", f.ic_width, "riemann ramp width (default 4h)");
  cmd->add_option("--gauss-width", f.ic_gauss_width, "gaussian width");
  cmd->add_option("--center", f.ic_center, "ic center");
  cmd->add_option("--ic-file", f.ic_file, "snapshot file used as initial condition");
  cmd->add_option("--xmin", f.xmin, "left domain endpoint");
  cmd->add_option("--xmax", f.xmax, "right domain endpoint");
  cmd->add_option("--M", f.M, "cell count");
  cmd->add_option("--tend", f.tend, "final time");
  cmd->add_option("--snapshots", f.snapshots, "snapshot times");
  cmd->add_option("--mode", f.mode, "decomposition mode (eigenbasis, travelling1)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--conservative", f.conservative, "advect with D0 f(u)");
  cmd->add_flag("--force", f.force, "run even if the hypothesis gate fails");
  cmd->add_option("--tv-guard", f.tv_guard, "small-data guard on TV(u0)");
}

ExperimentConfig assemble(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_file.empty()) cfg = parse_config_file(f.config_file);
  if (!f.system.empty()) cfg.system_name = f.system;
  if (!f.eps.empty()) cfg.eps_list = f.eps;
  if (!f.ic.empty()) cfg.ic.kind = f.ic;
  auto to_vec = [](const std::vector<double>& v) {
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
  };
  if (!f.ic_left.empty()) cfg.ic.left = to_vec(f.ic_left);
  if (!f.ic_right.empty()) cfg.ic.right = to_vec(f.ic_right);
  if (!f.ic_amplitude.empty()) cfg.ic.amplitude = to_vec(f.ic_amplitude);
  if (f.ic_width > 0) cfg.ic.width = f.ic_width;
  if (f.ic_gauss_width > 0) cfg.ic.gauss_width = f.ic_gauss_width;
  if (f.ic_center != 0) cfg.ic.center = f.ic_center;
  if (!f.ic_file.empty()) cfg.ic.profile_file = f.ic_file;
  if (f.xmin != 0 || f.xmax != 0) {
    cfg.xmin = f.xmin;
    cfg.xmax = f.xmax;
  }
  if (f.M > 0) cfg.M = f.M;
  if (f.tend > 0) cfg.t_end = f.tend;
  if (!f.snapshots.empty()) cfg.snapshot_times = f.snapshots;
  if (f.mode == "eigenbasis") cfg.mode = DecompositionMode::Eigenbasis;
  if (f.mode == "travelling1") cfg.mode = DecompositionMode::Travelling1;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.conservative) cfg.conservative = true;
  if (f.force) cfg.force = true;
  if (f.tv_guard > 0) cfg.tv_guard = f.tv_guard;
  return cfg;
}

void print_hypothesis_report(const HypothesisReport& rep, const SystemModel& model) {
  std::cout << "system " << model.name << ": " << rep.samples << " samples\n";
  std::cout << "  min gap         " << format_g17(rep.min_gap) << " (claimed "
            << format_g17(model.c0_claimed) << ") " << (rep.gap_ok ? "ok" : "FAIL") << "\n";
  std::cout << "  min mu          " << format_g17(rep.min_mu) << " (claimed "
            << format_g17(model.c1_claimed) << ") " << (rep.mu_ok ? "ok" : "FAIL") << "\n";
  std::cout << "  max commutator  " << format_g17(rep.max_commutator_rel) << " (rel) "
            << (rep.commutation_ok ? "ok" : "FAIL") << "\n";
  if (rep.max_flux_mismatch > 0)
    std::cout << "  flux Jacobian   " << format_g17(rep.max_flux_mismatch) << " (rel) "
              << (rep.flux_ok ? "ok" : "FAIL") << "\n";
  std::cout << (rep.pass() ? "PASS" : "FAIL") << "\n";
}

int cmd_check(const CommonFlags& f, int samples) {
  ExperimentConfig cfg = assemble(f);
  SystemModel model = resolve_system(cfg);
  HypothesisReport rep = check_hypotheses(model, samples > 0 ? samples
                                          : (model.n == 1 ? 101 : model.n == 2 ? 33 : 11));
  print_hypothesis_report(rep, model);
  return rep.pass() ? 0 : 1;
}

int cmd_simulate(const CommonFlags& f) {
  ExperimentConfig cfg = assemble(f);
  RunResult run = run_simulation(cfg);
  std::cout << "run written to " << (run.dir.empty() ? "(memory only)" : run.dir) << ", "
            << run.snapshots.size() << " snapshots, eps = " << format_g17(run.epsilon) << "\n";
  return 0;
}

int cmd_decompose(const CommonFlags& f, const std::string& snapshot_file,
                  const std::string& out_file) {
  ExperimentConfig cfg = assemble(f);
  SystemModel model = resolve_system(cfg);
  GridField snap = read_snapshot(snapshot_file);
  double eps = cfg.eps_list.front();
  GridField ut = compute_ut(model, snap, eps, cfg.conservative && model.eval_flux.has_value());
  WaveComponents comps = decompose_field(model, snap, ut, cfg.cutoff, cfg.mode);
  effective_fluxes(comps, model, snap, cfg.cutoff);
  write_components_csv(comps, out_file);
  std::cout << "decomposition written to " << out_file << " (max recon residual "
            << format_g17(comps.recon_residual.maxCoeff()) << ")\n";
  return 0;
}

int cmd_diagnose(const CommonFlags& f, const std::string& run_dir, const std::string& out_file) {
  ExperimentConfig cfg = assemble(f);
  RunResult run = load_run(run_dir);
  SystemModel model = resolve_system(cfg);
  ReportTable table = diagnose_run(model, run, cfg);
  write_report_csv(table, out_file);
  std::cout << "report with " << table.rows.size() << " rows written to " << out_file << "\n";
  return 0;
}

int cmd_tw(const CommonFlags& f, double span, int points, const std::string& out_file) {
  ExperimentConfig cfg = assemble(f);
  SystemModel model = resolve_system(cfg);
  if (cfg.ic.left.size() != model.n || cfg.ic.right.size() != model.n)
    throw ConfigError("tw needs --uleft and --uright n-vectors");
  RHSpeed rh = rh_speed(model, cfg.ic.left, cfg.ic.right);
  TravellingWaveProfile prof =
      profile_conservative(model, cfg.ic.left, cfg.ic.right, rh.sigma, span, points);
  ProfileReport rep = verify_profile(model, prof, cfg.mode);

  std::ofstream file(out_file);
  if (!file) throw Error("cannot write " + out_file);
  file << "xi";
  for (int c = 1; c <= model.n; ++c) file << ",u" << c;
  for (int c = 1; c <= model.n; ++c) file << ",du" << c;
  file << "\n";
  for (size_t j = 0; j < prof.xi_grid.size(); ++j) {
    file << format_g17(prof.xi_grid[j]);
    for (int c = 0; c < model.n; ++c) file << "," << format_g17(prof.U(c, j));
    for (int c = 0; c < model.n; ++c) file << "," << format_g17(prof.Uprime(c, j));
    file << "\n";
  }
  std::cout << "sigma              " << format_g17(prof.sigma) << "\n"
            << "RH residual        " << format_g17(rh.residual) << "\n"
            << "ODE residual       " << format_g17(rep.max_ode_residual) << "\n"
            << "endpoint residuals " << format_g17(rep.endpoint_minus) << " "
            << format_g17(rep.endpoint_plus) << "\n"
            << "speed identity     " << format_g17(rep.max_identity_residual) << "\n"
            << "profile written to " << out_file << "\n";
  return 0;
}

int cmd_smoothing(const std::string& run_dir, int k, double ta, double tb) {
  RunResult run = load_run(run_dir);
  SlopeFit fit = smoothing_check(run, k, ta, tb);
  std::cout << "k = " << k << ": slope " << format_g17(fit.slope) << " over ["
            << format_g17(fit.t_lo) << ", " << format_g17(fit.t_hi) << "] with " << fit.points
            << " points (target " << format_g17(-0.5 * k) << ")\n";
  return 0;
}

int cmd_sweep(const CommonFlags& f) {
  ExperimentConfig cfg = assemble(f);
  EpsSweepResult sweep = eps_sweep(cfg);
  std::cout << "eps, d_m (L1 difference to next), ratio\n";
  for (size_t m = 0; m < sweep.eps.size(); ++m) {
    std::cout << format_g17(sweep.eps[m]);
    if (m < sweep.d.size()) std::cout << ", " << format_g17(sweep.d[m]);
    if (m < sweep.ratios.size()) std::cout << ", " << format_g17(sweep.ratios[m]);
    std::cout << "\n";
  }
  if (std::isfinite(sweep.profile_distance))
    std::cout << "L1 distance to translated viscous profile at finest eps: "
              << format_g17(sweep.profile_distance) << "\n";
  return 0;
}

int cmd_report(const std::string& run_dir) {
  RunResult run = load_run(run_dir);
  std::cout << "run " << run_dir << ": " << run.snapshots.size() << " snapshots, eps = "
            << format_g17(run.epsilon) << "\n";
  double tv0 = tv(run.snapshots.front()).total;
  std::cout << "t, tv_total, ratio\n";
  for (size_t k = 0; k < run.snapshots.size(); ++k) {
    double tvk = tv(run.snapshots[k]).total;
    std::cout << format_g17(run.times[k]) << ", " << format_g17(tvk) << ", "
              << format_g17(tv0 > 0 ? tvk / tv0 : 1.0) << "\n";
  }
  try {
    L1ContinuityFit fit = l1_continuity_fit(run);
    std::cout << "L1 continuity fit: L2a = " << format_g17(fit.L2a)
              << ", L2b = " << format_g17(fit.L2b) << " (" << fit.pairs << " pairs)\n";
  } catch (const InsufficientWindow&) {
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"viscous hyperbolic systems laboratory"};
  app.require_subcommand(1);

  CommonFlags f;
  int check_samples = 0;
  std::string snapshot_file, out_file = "out.csv", run_dir;
  double tw_span = 40.0, ta = -1.0, tb = -1.0;
  int tw_points = 4001, smoothing_k = 1;

  CLI::App* check = app.add_subcommand("check", "hypothesis checks for a system");
  add_common(check, f);
  check->add_option("--samples", check_samples, "lattice samples per box axis");

  CLI::App* simulate = app.add_subcommand("simulate", "integrate a run and write snapshots");
  add_common(simulate, f);

  CLI::App* decompose_cmd = app.add_subcommand("decompose", "gradient decomposition of a snapshot");
  add_common(decompose_cmd, f);
  decompose_cmd->add_option("--snapshot", snapshot_file, "snapshot csv")->required();
  decompose_cmd->add_option("--out-file", out_file, "output csv");

  CLI::App* diagnose = app.add_subcommand("diagnose", "functional report for a run directory");
  add_common(diagnose, f);
  diagnose->add_option("--run", run_dir, "run directory")->required();
  diagnose->add_option("--out-file", out_file, "report csv");

  CLI::App* tw = app.add_subcommand("tw", "viscous travelling-wave profile");
  add_common(tw, f);
  tw->add_option("--uminus", f.ic_left, "left endpoint state")->required();
  tw->add_option("--uplus", f.ic_right, "right endpoint state")->required();
  tw->add_option("--span", tw_span, "half-width of the xi grid");
  tw->add_option("--points", tw_points, "profile samples");
  tw->add_option("--out-file", out_file, "profile csv");

  CLI::App* smoothing = app.add_subcommand("smoothing", "parabolic smoothing slope fit");
  smoothing->add_option("--run", run_dir, "run directory")->required();
  smoothing->add_option("--k", smoothing_k, "derivative order (1-3)");
  smoothing->add_option("--ta", ta, "window start");
  smoothing->add_option("--tb", tb, "window end");

  CLI::App* sweep = app.add_subcommand("sweep-eps", "vanishing-viscosity sweep");
  add_common(sweep, f);

  CLI::App* report = app.add_subcommand("report", "summarize a run directory");
  report->add_option("--run", run_dir, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(f, check_samples);
    if (simulate->parsed()) return cmd_simulate(f);
    if (decompose_cmd->parsed()) return cmd_decompose(f, snapshot_file, out_file);
    if (diagnose->parsed()) return cmd_diagnose(f, run_dir, out_file);
    if (tw->parsed()) {
      if (f.ic.empty()) f.ic = "riemann";
      return cmd_tw(f, tw_span, tw_points, out_file);
    }
    if (smoothing->parsed()) return cmd_smoothing(run_dir, smoothing_k, ta, tb);
    if (sweep->parsed()) return cmd_sweep(f);
    if (report->parsed()) return cmd_report(run_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
