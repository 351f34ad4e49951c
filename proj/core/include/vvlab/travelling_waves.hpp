#ifndef VVLAB_TRAVELLING_WAVES_HPP
#define VVLAB_TRAVELLING_WAVES_HPP

#include "vvlab/spectral.hpp"
#include "vvlab/wave_decomposition.hpp"

namespace vvlab {

/// Heteroclinic profile U(xi) of (A(U) - sigma I)U' = (B(U)U')' connecting
/// u_- (xi -> -inf) to u_+ (xi -> +inf).
struct TravellingWaveProfile {
  double sigma = 0.0;
  Vec u_minus, u_plus;
  std::vector<double> xi_grid;
  Mat U;       // n x M states along the profile
  Mat Uprime;  // derivative along the profile (from the first-order field)
};

struct RHSpeed {
  double sigma = 0.0;
  double residual = 0.0;  // ||f(u+) - f(u-) - sigma (u+ - u-)||
};

/// Rankine-Hugoniot speed; exact for scalars, least squares for systems.
RHSpeed rh_speed(const SystemModel& model, const Vec& u_minus, const Vec& u_plus);

/// Conservative-case profile: integrate B(U)U' = f(U) - f(u_-) - sigma (U - u_-)
/// from the mid-chord state both ways with adaptive RK4; NoConnection if an
/// orbit fails to approach its endpoint within endpoint_tol.
TravellingWaveProfile profile_conservative(const SystemModel& model, const Vec& u_minus,
                                           const Vec& u_plus, double sigma, double xi_span,
                                           int M);

struct ProfileOdeState {
  Vec u, v;
  double sigma = 0.0;
};

/// Phase-space field (u' = v, v' = B^-1(A - sigma)v - B^-1 (v.DB)v, sigma' = 0).
ProfileOdeState profile_ode_rhs(const SystemModel& model, const Vec& u, const Vec& v,
                                double sigma);

struct ProfileReport {
  double max_ode_residual = 0.0;       // pointwise 2nd-order ODE defect, interior
  double endpoint_minus = 0.0;         // |U(-end) - u_-|
  double endpoint_plus = 0.0;          // |U(+end) - u_+|
  double max_identity_residual = 0.0;  // |v_i,xi - mu_i^-1 (l~_i - sigma) v_i| on |v_i| > 1e-6
};

ProfileReport verify_profile(const SystemModel& model, const TravellingWaveProfile& profile,
                             DecompositionMode mode = DecompositionMode::Eigenbasis);

/// Scalar chord condition (Liu/Oleinik): admissible iff for sampled u between
/// the endpoints, (f(u)-f(u-))/(u-u-) >= sigma >= (f(u)-f(u+))/(u-u+).
bool oleinik_admissible(const FluxFn& flux, double u_minus, double u_plus,
                        int samples = 200);

}  // namespace vvlab

#endif
