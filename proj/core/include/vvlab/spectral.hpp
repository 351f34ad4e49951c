#ifndef VVLAB_SPECTRAL_HPP
#define VVLAB_SPECTRAL_HPP

#include "vvlab/system_models.hpp"

namespace vvlab {

/// Joint eigenstructure of A(u) and B(u) at one state. Right eigenvectors
/// are unit vectors, left ones biorthogonal (<l_i, r_j> = delta_ij); mu_i is
/// paired to the same eigenvector via <l_i, B r_i>, exact under commutation.
struct SpectralData {
  Vec lambdas;   // ascending
  Vec mus;
  Mat right_vecs;  // columns r_i
  Mat left_vecs;   // rows l_i
  Mat P;           // rows l_i (alias of left_vecs)
  Mat P_inv;       // columns r_i (alias of right_vecs)

  Vec r(int i) const { return right_vecs.col(i); }
  Vec l(int i) const { return left_vecs.row(i).transpose(); }
};

/// Eigendecomposition of A(u); closed form for n <= 2, QR-iteration route
/// for larger n. Orientation: each r_i sign-flipped so <r_i, r_i_ref> > 0
/// when a reference is supplied; otherwise anchored at the model's u*.
SpectralData decompose(const SystemModel& model, const Vec& u,
                       const SpectralData* orientation_ref = nullptr);

/// direction . D r_i, central finite difference of the orientation-continued
/// eigenvector field.
Vec eigenvector_derivative(const SystemModel& model, const Vec& u, int family,
                           const Vec& direction);

/// First-order travelling-wave basis correction: coefficients c_j (j != i) in
/// r~_i(u, v, sigma) = r_i + v * sum_{j != i} c_j r_j, from the order-v
/// invariance equation of the profile ODE:
///   c_j = <l_j, B r_{i,u} r_i + r_i . DB r_i> / ((l_j - s) - 2 mu_j mu_i^-1 (l_i - s)).
/// Slot i of the returned vector is 0.
Vec first_order_tw_correction(const SystemModel& model, const Vec& u, int family,
                              double sigma);

/// Numerator vector of the correction: g(u) = B(u) (r_i,u r_i) + (r_i . DB) r_i.
/// <l_i, g> is the order-v coefficient of lambda~_i; <l_j, g> feeds c_j.
Vec tw_correction_numerator(const SystemModel& model, const Vec& u, int family);

}  // namespace vvlab

#endif
