#ifndef VVLAB_WAVE_DECOMPOSITION_HPP
#define VVLAB_WAVE_DECOMPOSITION_HPP

#include "vvlab/pde_solver.hpp"
#include "vvlab/spectral.hpp"

namespace vvlab {

/// Thresholds of the cutoff family. delta1 bounds the speed correction
/// theta(w_i/v_i); chi is evaluated at v_i^{2N}/epsilon_cut.
struct CutoffParams {
  double delta1 = 0.05;
  int N = 2;
  double epsilon_cut = 1e-12;
  double v_floor = 1e-12;        // 0/0 convention: w/v -> 0 below this
  double newton_tol = 1e-10;
  double small_data_factor = 0.5;  // threshold = factor * c0 for travelling1
};

/// Odd C^2 cutoff: theta(s) = s on |s| <= d1, 0 on |s| >= 3 d1,
/// |theta'| <= 1, |theta''| <= 3.75/d1.
double theta(double s, double delta1);
double theta_prime(double s, double delta1);
double theta_second(double s, double delta1);

/// Even C^3 cutoffs (order-7 smoothstep bridges):
/// eta = 1 on |s| <= 3/4, 0 on |s| >= 4/5;
/// xi  = 1 on |s| <= d1/2, 0 on |s| >= d1;
/// chi = 0 on |s| <= 1, 1 on |s| >= 2.
double eta(double s);
double xi(double s, double delta1);
double xi_prime(double s, double delta1);
double chi(double s);

/// Energy cutoffs: eta_tilde = 0 on |s| <= d1/3, 1 on |s| >= 3 d1/8;
/// eta_bar(s) = eta_tilde(|s| - d1/24).
double eta_tilde(double s, double delta1);
double eta_bar(double s, double delta1);

enum class DecompositionMode { Eigenbasis, Travelling1 };

/// Gradient decomposition u_x = sum_i v_i r~_i, u_t = sum_i (w_i - l_i* v_i) r~_i
/// on a grid, with the cutoff machinery evaluated per point.
struct WaveComponents {
  DecompositionMode mode = DecompositionMode::Eigenbasis;
  double x0 = 0.0, h = 0.0, time = 0.0;
  Boundary boundary = Boundary::ConstantExtrapolation;
  CutoffParams params;
  Vec lambda_star;  // eigenvalues at the reference state u*
  Vec u_star;

  // n x M per-point data
  Mat v, w, sigma, vbar, lambda_tilde;
  Mat xi_val, chi_val, eta_val;
  Mat mu, lambda;                // spectral fields along the grid
  Mat z, zhat;                   // effective fluxes (filled by effective_fluxes)
  Eigen::RowVectorXd recon_residual;  // max-norm reconstruction defect per point
  // per-point projections <l_j, g_i> of the travelling-wave correction numerators
  std::vector<Mat> basis_proj;

  int n() const { return static_cast<int>(v.rows()); }
  int M() const { return static_cast<int>(v.cols()); }

  /// Scalar component field as a GridField (for stencils and functionals).
  GridField component(const Mat& data, int family) const;
};

/// Solve for (v, w) at every grid point. Eigenbasis mode is the exact linear
/// solve v_i = <l_i, u_x>, w_i = <l_i, u_t> + l_i* v_i; travelling1 runs a
/// damped Newton iteration on the 2n nonlinear equations with the first-order
/// travelling-wave basis r~_i = r_i + (xi_i vbar_i) sum_j c_j(u, sigma_i) r_j.
WaveComponents decompose_field(const SystemModel& model, const GridField& field,
                               const GridField& ut_field, const CutoffParams& params,
                               DecompositionMode mode);

/// Effective fluxes z_i, zhat_i = mu_i d_x(v_i|w_i) - (l~_i - l_i*)(v_i|w_i)
/// + sum_{j != i} (a_ij|ahat_ij)(w_{j,x} - (w_j/v_j) v_{j,x}), with
/// a_ij = mu_i b_ij and b_ij = xi_j' vbar_j psi_ji,v - psi_ji,sigma
/// (identically zero in eigenbasis mode). Fills comps.z / comps.zhat.
void effective_fluxes(WaveComponents& comps, const SystemModel& model,
                      const GridField& field, const CutoffParams& params);

/// Pointwise interaction terms Lambda^1..Lambda^8 (6,1 included) and their
/// per-family L1 norms.
struct LambdaTerms {
  // each n x M
  Mat l1, l2, l3, l4, l5, l6, l61, l7, l8;
  // L1-in-x norms, per family
  Vec n1, n2, n3, n4, n5, n6, n61, n7, n8;
};

LambdaTerms lambda_terms(const WaveComponents& comps, const CutoffParams& params);

/// Discrete residuals of the diagonal advection-diffusion equations for
/// (v_i, w_i, z_i, zhat_i) between consecutive decomposed snapshots, plus the
/// diagnostic ratio |phi~| L1 over the Lambda bound of (boundphi).
struct DiagonalResiduals {
  double t = 0.0;
  Mat phi, psi, Phi, Psi;            // n x M residual fields
  Vec phi_l1, psi_l1, Phi_l1, Psi_l1;  // per family
  double lambda_bound_l1 = 0.0;        // sum_j ||L1 + d0^2 L3 + L4 + L5 + L6 + L61||_1
  double ratio_phi = 0.0;              // sum_i ||phi_i||_1 / lambda_bound_l1
};

DiagonalResiduals diagonal_residuals(const SystemModel& model,
                                     const std::vector<WaveComponents>& snapshots,
                                     const std::vector<double>& times,
                                     const CutoffParams& params, double delta0 = 1.0);

}  // namespace vvlab

#endif
