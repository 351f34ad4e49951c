#ifndef VVLAB_EXPERIMENTS_HPP
#define VVLAB_EXPERIMENTS_HPP

#include <limits>
#include <map>
#include <string>

#include "vvlab/functionals.hpp"
#include "vvlab/travelling_waves.hpp"

namespace vvlab {

struct InitialCondition {
  std::string kind = "gaussian";  // riemann | gaussian | constant | profile
  Vec left, right;                // riemann endpoints
  double width = 0.0;             // tanh ramp width; 0 means 4h
  Vec amplitude;                  // gaussian per-component amplitudes
  double gauss_width = 0.5;
  double center = 0.0;
  std::string profile_file;
};

struct ExperimentConfig {
  std::string system_name = "burgers";
  std::optional<SystemModel> custom_system;
  InitialCondition ic;
  double xmin = -10.0, xmax = 10.0;
  int M = 512;
  std::vector<double> eps_list = {1.0};
  double t_end = 1.0;
  std::vector<double> snapshot_times;  // in (0, t_end]; empty -> {t_end}
  CutoffParams cutoff;
  DecompositionMode mode = DecompositionMode::Eigenbasis;
  std::string out_dir;
  unsigned long long seed = 0;
  double tv_guard = 0.5;
  double bound_guard_scalar = 1.05;
  double bound_guard_system = 2.0;
  bool conservative = false;
  bool force = false;
  double cfl_advective = 0.4;
  double cfl_parabolic = 0.4;
  int hypothesis_samples = 0;  // 0 -> per-dimension default

  /// Canonical `key = value` echo used for the manifest and the config hash.
  std::string echo() const;
  uint64_t hash() const;
};

/// `key = value` file with [section] headers; unknown keys or sections are
/// errors. Returns the parsed config (defaults where keys are absent).
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

SystemModel resolve_system(const ExperimentConfig& cfg);
GridField build_initial_condition(const SystemModel& model, const ExperimentConfig& cfg);

struct RunResult {
  std::string dir;  // empty when not persisted
  double epsilon = 1.0;
  std::vector<double> times;        // includes t = 0
  std::vector<GridField> snapshots;  // snapshots[0] is the initial condition
};

/// Preflight: check_hypotheses on the configured system plus the TV data
/// guard; throws HypothesisFailed unless cfg.force.
HypothesisReport hypothesis_gate(const ExperimentConfig& cfg);

/// Integrate one run (first epsilon of the list), write snapshots, manifest
/// and a TV report when out_dir is set. Deterministic given config + seed.
RunResult run_simulation(const ExperimentConfig& cfg);

/// Same, for one explicit epsilon, written under out_dir/sub (if persisted).
RunResult run_single(const SystemModel& model, const ExperimentConfig& cfg, double eps,
                     const std::string& sub);

RunResult load_run(const std::string& dir);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
  double t_lo = 0.0, t_hi = 0.0;
};

/// Least-squares slope of log ||d_x^k u_x||_L1 vs log t on [t_lo, t_hi]
/// (defaults: time range with first and last 10% excluded).
SlopeFit smoothing_check(const RunResult& run, int k, double t_lo = -1.0, double t_hi = -1.0);

struct BvReport {
  std::vector<double> ratio;  // TV(u(t)) / TV(u(0)), 1 by convention when TV(0)=0
  double max_ratio = 1.0;
  double guard = 1.05;
  bool flagged = false;
};

BvReport bv_check(const RunResult& run, double guard);

struct L1ContinuityFit {
  double L2a = 0.0;
  double L2b = 0.0;
  int pairs = 0;
};

/// Nonnegative least squares of ||u(t)-u(s)||_1 <= L2a |t-s| + L2b sqrt(eps)
/// |sqrt(t)-sqrt(s)|, then scaled so no pair violates the fitted bound.
L1ContinuityFit l1_continuity_fit(const RunResult& run);

struct EpsSweepResult {
  std::vector<double> eps;
  std::vector<RunResult> runs;
  std::vector<double> d;       // L1 distances between consecutive eps at t_end
  std::vector<double> ratios;  // d_{m+1} / d_m
  double profile_distance = std::numeric_limits<double>::quiet_NaN();
};

EpsSweepResult eps_sweep(const ExperimentConfig& cfg);

/// sup |u(T,x) - clamp(x/T, uL, uR)| over |x/T| <= window (Burgers fan).
double burgers_rarefaction_sup_distance(const GridField& field, double u_left, double u_right,
                                        double T, double window);

/// L1 distance between a scalar monotone snapshot and the viscous profile
/// U((x - shift)/eps), shift fixed by the mid-value crossing.
double profile_l1_distance(const GridField& field, const TravellingWaveProfile& profile,
                           double eps);

/// Full per-snapshot functional table (tv, Q, A, L, energies, Lambda norms,
/// dissipation flags); written by the diagnose subcommand.
struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

ReportTable diagnose_run(const SystemModel& model, const RunResult& run,
                         const ExperimentConfig& cfg);

void write_report_csv(const ReportTable& table, const std::string& path);

// snapshot io (header x,u1..un; 17 significant digits)
void write_snapshot(const GridField& field, const std::string& path);
GridField read_snapshot(const std::string& path);
void write_components_csv(const WaveComponents& comps, const std::string& path);

std::string format_g17(double v);

}  // namespace vvlab

#endif
