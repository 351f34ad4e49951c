#ifndef VVLAB_SYSTEM_MODELS_HPP
#define VVLAB_SYSTEM_MODELS_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vvlab/errors.hpp"

namespace vvlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using MatrixFn = std::function<Mat(const Vec&)>;
using FluxFn = std::function<Vec(const Vec&)>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

/// A strictly hyperbolic system u_t + A(u)u_x = (B(u)u_x)_x with commuting
/// positive viscosity B. Matrices are supplied as callbacks; the optional
/// conservative flux f must satisfy Df = A.
struct SystemModel {
  std::string name;
  int n = 1;
  MatrixFn eval_A;
  MatrixFn eval_B;
  std::optional<FluxFn> eval_flux;
  std::vector<Interval> state_box;
  double c0_claimed = 1.0;  // spectral gap floor
  double c1_claimed = 1.0;  // viscosity eigenvalue floor
  Vec u_star;               // reference state, inside state_box

  bool in_box(const Vec& u, double inflation = 0.0) const;
  /// Box inflated by `frac` of each interval width on both sides.
  std::vector<Interval> inflated_box(double frac) const;
};

struct HypothesisReport {
  int samples = 0;
  double min_gap = 0.0;          // min over samples of min_{i!=j} |l_i - l_j|
  double min_mu = 0.0;           // min over samples of min_i mu_i
  double max_commutator = 0.0;   // max ||AB-BA||_F
  double max_commutator_rel = 0.0;  // relative to 1 + |A||B|
  double max_flux_mismatch = 0.0;   // relative central-difference Df vs A
  bool gap_ok = false;
  bool mu_ok = false;
  bool commutation_ok = false;
  bool flux_ok = true;  // vacuous when no flux
  bool pass() const { return gap_ok && mu_ok && commutation_ok && flux_ok; }
};

/// Sweeps a uniform lattice (samples_per_axis per box axis) and reports the
/// worst spectral gap, viscosity floor, commutator norm and flux Jacobian
/// mismatch against the model's claimed constants.
HypothesisReport check_hypotheses(const SystemModel& model, int samples_per_axis);

/// Built-in catalogue: burgers, heat, decoupled2, shared_frame2, shared_frame3.
SystemModel builtin_system(const std::string& name);

/// Shared-eigenframe system A = R diag(lambda_i(u_i)) R^-1,
/// B = R diag(mu_i(u_i)) R^-1; lambda_i, mu_i polynomials in the i-th state
/// component with coefficients listed low-to-high degree.
SystemModel make_shared_frame_system(const std::string& name, const Mat& frame,
                                     const std::vector<std::vector<double>>& lambda_coeffs,
                                     const std::vector<std::vector<double>>& mu_coeffs,
                                     const std::vector<Interval>& box,
                                     double c0, double c1, const Vec& u_star);

/// Central-difference directional derivative of a matrix callback,
/// (direction . DM)(u), step 1e-5 * (1 + |u|).
Mat matrix_directional_derivative(const MatrixFn& M, const Vec& u, const Vec& direction);

double polynomial_eval(const std::vector<double>& coeffs_low_to_high, double x);

}  // namespace vvlab

#endif
