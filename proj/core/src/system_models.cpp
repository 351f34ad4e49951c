#include "vvlab/system_models.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace vvlab {

bool SystemModel::in_box(const Vec& u, double inflation) const {
  for (int c = 0; c < n; ++c) {
    const Interval& iv = state_box[c];
    double pad = inflation * iv.width();
    if (u[c] < iv.lo - pad || u[c] > iv.hi + pad) return false;
  }
  return true;
}

std::vector<Interval> SystemModel::inflated_box(double frac) const {
  std::vector<Interval> out = state_box;
  for (auto& iv : out) {
    double pad = frac * iv.width();
    iv.lo -= pad;
    iv.hi += pad;
  }
  return out;
}

double polynomial_eval(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Mat matrix_directional_derivative(const MatrixFn& M, const Vec& u, const Vec& direction) {
  double nd = direction.norm();
  if (nd == 0.0) return Mat::Zero(u.size(), u.size());
  Vec d = direction / nd;
  double h = 1e-5 * (1.0 + u.norm());
  return (M(u + h * d) - M(u - h * d)) * (nd / (2.0 * h));
}

namespace {

// Real eigenvalues of one sample point, sorted; throws NonRealSpectrum.
Vec sample_eigenvalues(const Mat& A) {
  if (A.rows() == 1) return A.col(0);
  Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
  double scale = 1.0 + A.norm();
  Vec lambdas(A.rows());
  for (int i = 0; i < A.rows(); ++i) {
    std::complex<double> ev = es.eigenvalues()[i];
    if (std::abs(ev.imag()) > 1e-9 * scale)
      throw NonRealSpectrum("imaginary eigenvalue part " + std::to_string(ev.imag()));
    lambdas[i] = ev.real();
  }
  std::sort(lambdas.data(), lambdas.data() + lambdas.size());
  return lambdas;
}

Vec sample_mus(const Mat& A, const Mat& B) {
  // By commutation A and B share eigenvectors; pair mu_i to the i-th
  // (ascending-lambda) eigenvector of A.
  if (A.rows() == 1) return B.col(0);
  Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/true);
  double scale = 1.0 + A.norm();
  int n = static_cast<int>(A.rows());
  std::vector<int> order(n);
  Vec lambdas(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> ev = es.eigenvalues()[i];
    if (std::abs(ev.imag()) > 1e-9 * scale)
      throw NonRealSpectrum("imaginary eigenvalue part " + std::to_string(ev.imag()));
    lambdas[i] = ev.real();
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lambdas[a] < lambdas[b]; });
  Mat R(n, n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXcd col = es.eigenvectors().col(order[k]);
    R.col(k) = col.real();
    R.col(k).normalize();
  }
  Mat L = R.inverse();
  Vec mus(n);
  for (int k = 0; k < n; ++k) mus[k] = (L.row(k) * (B * R.col(k)))(0);
  return mus;
}

}  // namespace

HypothesisReport check_hypotheses(const SystemModel& model, int samples_per_axis) {
  if (samples_per_axis < 2) throw Error("check_hypotheses: samples_per_axis must be >= 2");
  const int n = model.n;
  HypothesisReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();
  rep.min_mu = std::numeric_limits<double>::infinity();

  std::vector<int> idx(n, 0);
  Vec u(n);
  bool done = false;
  while (!done) {
    for (int c = 0; c < n; ++c) {
      const Interval& iv = model.state_box[c];
      u[c] = iv.lo + (iv.hi - iv.lo) * idx[c] / double(samples_per_axis - 1);
    }
    if (!model.in_box(u)) throw EvaluationOutsideBox("lattice sample left the box");

    Mat A = model.eval_A(u);
    Mat B = model.eval_B(u);
    Vec lambdas = sample_eigenvalues(A);
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < n; ++i) gap = std::min(gap, lambdas[i + 1] - lambdas[i]);
    rep.min_gap = std::min(rep.min_gap, gap);

    Vec mus = sample_mus(A, B);
    rep.min_mu = std::min(rep.min_mu, mus.minCoeff());

    double comm = (A * B - B * A).norm();
    rep.max_commutator = std::max(rep.max_commutator, comm);
    rep.max_commutator_rel =
        std::max(rep.max_commutator_rel, comm / (1.0 + A.norm() * B.norm()));

    if (model.eval_flux) {
      const FluxFn& f = *model.eval_flux;
      Mat J(n, n);
      for (int c = 0; c < n; ++c) {
        double h = 1e-5 * (1.0 + std::abs(u[c]));
        Vec up = u, um = u;
        up[c] += h;
        um[c] -= h;
        J.col(c) = (f(up) - f(um)) / (2.0 * h);
      }
      double mismatch = (J - A).norm() / (1.0 + A.norm());
      rep.max_flux_mismatch = std::max(rep.max_flux_mismatch, mismatch);
    }

    ++rep.samples;
    done = true;
    for (int c = 0; c < n; ++c) {
      if (++idx[c] < samples_per_axis) {
        done = false;
        break;
      }
      idx[c] = 0;
    }
  }

  rep.gap_ok = (n == 1) || (rep.min_gap >= model.c0_claimed);
  rep.mu_ok = rep.min_mu >= model.c1_claimed;
  rep.commutation_ok = rep.max_commutator_rel <= 1e-10;
  rep.flux_ok = !model.eval_flux || rep.max_flux_mismatch <= 1e-5;
  return rep;
}

SystemModel make_shared_frame_system(const std::string& name, const Mat& frame,
                                     const std::vector<std::vector<double>>& lambda_coeffs,
                                     const std::vector<std::vector<double>>& mu_coeffs,
                                     const std::vector<Interval>& box,
                                     double c0, double c1, const Vec& u_star) {
  SystemModel m;
  m.name = name;
  m.n = static_cast<int>(frame.rows());
  Mat R = frame;
  Mat Rinv = frame.inverse();
  m.eval_A = [R, Rinv, lambda_coeffs](const Vec& u) {
    Vec d(u.size());
    for (int i = 0; i < u.size(); ++i) d[i] = polynomial_eval(lambda_coeffs[i], u[i]);
    return Mat(R * d.asDiagonal() * Rinv);
  };
  m.eval_B = [R, Rinv, mu_coeffs](const Vec& u) {
    Vec d(u.size());
    for (int i = 0; i < u.size(); ++i) d[i] = polynomial_eval(mu_coeffs[i], u[i]);
    return Mat(R * d.asDiagonal() * Rinv);
  };
  m.state_box = box;
  m.c0_claimed = c0;
  m.c1_claimed = c1;
  m.u_star = u_star;
  return m;
}

SystemModel builtin_system(const std::string& name) {
  SystemModel m;
  m.name = name;
  if (name == "burgers") {
    m.n = 1;
    m.eval_A = [](const Vec& u) { return Mat::Constant(1, 1, u[0]); };
    m.eval_B = [](const Vec&) { return Mat::Identity(1, 1); };
    m.eval_flux = [](const Vec& u) { return Vec::Constant(1, 0.5 * u[0] * u[0]); };
    m.state_box = {{-2.0, 2.0}};
    m.c0_claimed = 1.0;  // gap check vacuous for n = 1
    m.c1_claimed = 1.0;
    m.u_star = Vec::Zero(1);
  } else if (name == "heat") {
    m.n = 1;
    m.eval_A = [](const Vec&) { return Mat::Zero(1, 1); };
    m.eval_B = [](const Vec&) { return Mat::Identity(1, 1); };
    m.state_box = {{-2.0, 2.0}};
    m.c0_claimed = 1.0;
    m.c1_claimed = 1.0;
    m.u_star = Vec::Zero(1);
  } else if (name == "decoupled2") {
    m.n = 2;
    m.eval_A = [](const Vec& u) {
      Mat A = Mat::Zero(2, 2);
      A(0, 0) = u[0];
      A(1, 1) = 1.0 + u[1];
      return A;
    };
    m.eval_B = [](const Vec&) {
      Mat B = Mat::Zero(2, 2);
      B(0, 0) = 1.0;
      B(1, 1) = 2.0;
      return B;
    };
    m.state_box = {{-0.2, 0.2}, {-0.2, 0.2}};
    m.c0_claimed = 0.6;
    m.c1_claimed = 1.0;
    m.u_star = Vec::Zero(2);
  } else if (name == "shared_frame2") {
    Mat R(2, 2);
    R << 1, 1, 0, 1;
    return make_shared_frame_system(name, R,
                                    {{0.0, 1.0}, {2.0, 1.0}},          // u1, 2+u2
                                    {{1.0, 0.0, 1.0}, {2.0}},          // 1+u1^2, 2
                                    {{-0.2, 0.2}, {-0.2, 0.2}}, 1.6, 1.0, Vec::Zero(2));
  } else if (name == "shared_frame3") {
    Mat R(3, 3);
    R << 1, 1, 0, 0, 1, 1, 0, 0, 1;
    return make_shared_frame_system(name, R,
                                    {{0.0, 1.0}, {2.0, 1.0}, {4.0, 1.0}},
                                    {{1.0, 0.0, 1.0}, {2.0}, {3.0, 0.0, 1.0}},
                                    {{-0.2, 0.2}, {-0.2, 0.2}, {-0.2, 0.2}},
                                    1.6, 1.0, Vec::Zero(3));
  } else {
    throw UnknownSystem(name);
  }
  return m;
}

}  // namespace vvlab
