#ifndef VVLAB_PDE_SOLVER_HPP
#define VVLAB_PDE_SOLVER_HPP

#include "vvlab/system_models.hpp"

namespace vvlab {

enum class Boundary { ConstantExtrapolation, Periodic };

/// Uniform 1-D grid of n-vector states; values column j is the state at
/// x0 + j h. Ghost cells follow the boundary policy.
struct GridField {
  double x0 = 0.0;
  double h = 1.0;
  int M = 0;
  Mat values;  // n x M
  Boundary boundary = Boundary::ConstantExtrapolation;
  double time = 0.0;

  int n() const { return static_cast<int>(values.rows()); }
  double x(int j) const { return x0 + j * h; }
  /// State at index j with ghost handling for j outside [0, M).
  Vec at(int j) const;
};

struct SolverConfig {
  double cfl_advective = 0.4;   // in (0, 1]
  double cfl_parabolic = 0.4;   // in (0, 0.5]
  double epsilon = 1.0;         // viscosity scale
  double t_end = 1.0;
  int snapshot_stride = 1;
  bool conservative = false;    // advect with D0 f(u) instead of A(u) D0 u
};

/// Largest stable explicit step:
/// min(cfl_a h / max|lambda|, cfl_p h^2 / (eps max mu)); the advective bound
/// is skipped when max|lambda| = 0.
double dt_stable(const SystemModel& model, const GridField& field, const SolverConfig& config);

/// One Heun (two-stage explicit) step of
///   du_j/dt = -A(u_j) D0 u_j + eps [B(u_{j+1/2})(u_{j+1}-u_j) - B(u_{j-1/2})(u_j-u_{j-1})]/h^2
/// with B at midpoints evaluated at the state average.
GridField step(const SystemModel& model, const GridField& field, const SolverConfig& config,
               double dt);

/// The semidiscrete right-hand side itself, eps Dflux_j - A(u_j) D0 u_j
/// (the same stencils step() integrates).
GridField compute_ut(const SystemModel& model, const GridField& field, double epsilon,
                     bool conservative = false);

/// Central stencils: k=1,2 second order; k=3 the five-point
/// (-u_{j-2} + 2u_{j-1} - 2u_{j+1} + u_{j+2}) / (2h^3).
GridField derivative(const GridField& field, int order);

struct L1Norm {
  std::vector<double> per_component;
  double total = 0.0;
};

/// Cell sum h * sum_j |.| per component; total adds the components.
L1Norm l1_norm(const GridField& field);

/// max_j |u_j - v_j| over all components (grids must match).
double linf_distance(const GridField& a, const GridField& b);
double l1_distance(const GridField& a, const GridField& b);

}  // namespace vvlab

#endif
