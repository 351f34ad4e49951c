#ifndef VVLAB_FUNCTIONALS_HPP
#define VVLAB_FUNCTIONALS_HPP

#include "vvlab/wave_decomposition.hpp"

namespace vvlab {

struct TotalVariation {
  std::vector<double> per_component;
  double total = 0.0;
};

/// TV_c = sum_j |u_{j+1,c} - u_{j,c}|, total over components.
TotalVariation tv(const GridField& field);

/// One-sided exponential kernel of the transversal interaction functional:
/// K(0) = 1/c exactly.
double transversal_kernel(double s, double c, double c1);

/// Q = h^2 sum_{j,k} K(x_j - x_k) |z_j| |z#_k|, direct O(M^2) double sum.
/// Fields must share the grid; M capped at 4096.
double transversal_q(const GridField& z, const GridField& z_sharp, double c, double c1);

/// A = 1/2 h^2 sum_{j<k} |z1_j z2_k - z1_k z2_j|, O(M^2), M capped at 4096.
double area_functional(const GridField& zeta1, const GridField& zeta2);

/// L = h sum_j sqrt(v_j^2 + w_j^2).
double length_functional(const GridField& v, const GridField& w);

/// One time level of the transversal pair (z, z#) with speeds, viscosities
/// and sources; sources are the discrete diagonal residuals in practice.
struct TransversalSnapshot {
  double t = 0.0;
  GridField z, z_sharp;
  GridField lambda, lambda_sharp;  // scalar speed fields
  GridField mu, mu_sharp;          // scalar viscosity fields
  GridField phi, phi_sharp;        // sources
};

struct DissipationSeries {
  std::vector<double> t;         // left endpoint of each step
  std::vector<double> value;     // functional value at t
  std::vector<double> residual;  // D_k
  std::vector<bool> pass;        // D_k <= tol
  double tol = 0.0;
  double pass_fraction = 1.0;
  // Lemma-style integral bound bookkeeping (transversal check only)
  double c = 0.0, c1 = 0.0;
  double interaction_integral = 0.0;  // int int |z z#|
  double e1 = 0.0, e2 = 0.0;          // ||z(0)||_1 + int||phi||, same for z#
};

/// Discrete check of dQ/dt <= -int|z z#| + K(0)(||z||_1 ||phi#||_1 + ||z#||_1 ||phi||_1):
/// D_k = [Q(t_{k+1}) - Q(t_k)]/dt + int|z z#|(t_k) - (1/c)(...)(t_k).
/// The gap hypothesis inf lambda# - sup lambda - 2 max||mu_x|| >= c > 0 is
/// measured from the data; GapViolated if it fails.
DissipationSeries transversal_dissipation_check(const std::vector<TransversalSnapshot>& traj,
                                                double tol_rel = 1e-3);

struct AreaSnapshot {
  double t = 0.0;
  GridField v, w;      // the curve components zeta_1, zeta_2
  GridField mu;        // viscosity coefficient field
  GridField phi, psi;  // sources of the two equations
};

/// Discrete check of dA/dt <= -int mu |v_x w - v w_x| + ||v||_1||psi||_1 + ||w||_1||phi||_1.
DissipationSeries area_dissipation_check(const std::vector<AreaSnapshot>& traj,
                                         double tol_rel = 1e-3);

struct EnergyFunctionals {
  Vec e_v;        // int eta~(w_i/v_i) v_{i,x}^2
  Vec e_w;        // int eta_bar(w_i/v_i) w_{i,x}^2
  Vec curvature;  // int 1{|w/v|<=3d1, v^{2N}>=eps} |v_i| ((w_i/v_i)_x)^2
};

EnergyFunctionals energy_functionals(const WaveComponents& comps, const CutoffParams& params);

/// Viscosity-weighted coordinate map X_i(x) = int_0^x d_i(u(z))^{-1/2} dz and
/// the composition operators T f = f o X_i, T^-1 f = f o X_i^-1.
/// X is tabulated by trapezoid quadrature and interpolated by a monotone
/// cubic; f is resampled with a cubic Hermite interpolant.
class CoordinateMap {
 public:
  /// mus: d_i(u(x_j)) samples on the grid (must be >= floor > 0).
  CoordinateMap(const GridField& grid_like, const Vec& mus, double floor);

  double X(double x) const;
  double X_inverse(double y) const;
  GridField apply(const GridField& f) const;          // (T f)(x_j) = f(X(x_j))
  GridField apply_inverse(const GridField& f) const;  // f(X^-1(x_j))
  double sup_d() const { return sup_d_; }

 private:
  std::vector<double> x_, Xx_;
  std::vector<double> fwd_slopes_, inv_slopes_;
  double h_ = 0.0;
  double sup_d_ = 0.0;
};

CoordinateMap rescale_coordinates(const GridField& field, int family, const Vec& mus,
                                  double floor = 1e-12);

}  // namespace vvlab

#endif
