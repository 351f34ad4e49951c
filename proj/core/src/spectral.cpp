#include "vvlab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace vvlab {

namespace {

constexpr double kDegenerateGap = 1e-8;

// Canonical sign: largest-magnitude component positive.
void canonical_sign(Vec& r) {
  int imax = 0;
  for (int k = 1; k < r.size(); ++k)
    if (std::abs(r[k]) > std::abs(r[imax])) imax = k;
  if (r[imax] < 0) r = -r;
}

// Raw (unoriented) eigenpairs of A, lambdas ascending, unit right vectors.
void raw_eigen(const Mat& A, Vec& lambdas, Mat& R) {
  const int n = static_cast<int>(A.rows());
  lambdas.resize(n);
  R.resize(n, n);
  if (n == 1) {
    lambdas[0] = A(0, 0);
    R(0, 0) = 1.0;
    return;
  }
  if (n == 2) {
    double a = A(0, 0), b = A(0, 1), c = A(1, 0), d = A(1, 1);
    double tr = a + d, det = a * d - b * c;
    double disc = 0.25 * tr * tr - det;
    double scale = 1.0 + A.norm();
    if (disc < 0) {
      if (disc > -1e-18 * scale * scale)
        disc = 0.0;
      else
        throw ComplexEigenvalues("2x2 discriminant " + std::to_string(disc));
    }
    double s = std::sqrt(disc);
    lambdas[0] = 0.5 * tr - s;
    lambdas[1] = 0.5 * tr + s;
    for (int k = 0; k < 2; ++k) {
      // (A - lambda I) r = 0; pick the better-conditioned null-vector form.
      double lam = lambdas[k];
      Vec r1(2), r2(2);
      r1 << b, lam - a;
      r2 << lam - d, c;
      Vec r = (r1.norm() >= r2.norm()) ? r1 : r2;
      if (r.norm() == 0.0) {
        r = Vec::Zero(2);  // diagonal matrix: coordinate vector
        r[k] = 1.0;
      }
      R.col(k) = r.normalized();
    }
    return;
  }
  Eigen::EigenSolver<Mat> es(A, true);
  double scale = 1.0 + A.norm();
  std::vector<int> order(n);
  Vec raw(n);
  for (int i = 0; i < n; ++i) {
    auto ev = es.eigenvalues()[i];
    if (std::abs(ev.imag()) > 1e-9 * scale)
      throw ComplexEigenvalues("imaginary part " + std::to_string(ev.imag()));
    raw[i] = ev.real();
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return raw[a] < raw[b]; });
  for (int k = 0; k < n; ++k) {
    lambdas[k] = raw[order[k]];
    Eigen::VectorXcd col = es.eigenvectors().col(order[k]);
    if (col.imag().norm() > 1e-9 * col.norm())
      throw ComplexEigenvalues("complex eigenvector in family " + std::to_string(k));
    Vec r = col.real();
    R.col(k) = r.normalized();
  }
}

SpectralData assemble(const SystemModel& model, const Vec& u, Vec lambdas, Mat R,
                      const SpectralData* ref) {
  const int n = model.n;
  for (int i = 0; i + 1 < n; ++i)
    if (lambdas[i + 1] - lambdas[i] < kDegenerateGap)
      throw DegenerateSpectrum("gap " + std::to_string(lambdas[i + 1] - lambdas[i]));

  for (int i = 0; i < n; ++i) {
    Vec r = R.col(i);
    if (ref != nullptr) {
      if (r.dot(ref->right_vecs.col(i)) < 0) r = -r;
    } else {
      canonical_sign(r);
    }
    R.col(i) = r;
  }

  SpectralData sd;
  sd.lambdas = std::move(lambdas);
  sd.right_vecs = R;
  sd.P_inv = R;
  sd.P = R.inverse();
  sd.left_vecs = sd.P;
  Mat B = model.eval_B(u);
  sd.mus.resize(n);
  for (int i = 0; i < n; ++i) sd.mus[i] = (sd.left_vecs.row(i) * (B * R.col(i)))(0);
  return sd;
}

}  // namespace

SpectralData decompose(const SystemModel& model, const Vec& u, const SpectralData* ref) {
  Mat A = model.eval_A(u);
  Vec lambdas;
  Mat R;
  raw_eigen(A, lambdas, R);
  if (ref != nullptr || (u - model.u_star).norm() == 0.0)
    return assemble(model, u, std::move(lambdas), std::move(R), ref);
  // No reference supplied: anchor the orientation at u*.
  Mat As = model.eval_A(model.u_star);
  Vec ls;
  Mat Rs;
  raw_eigen(As, ls, Rs);
  SpectralData anchor = assemble(model, model.u_star, std::move(ls), std::move(Rs), nullptr);
  return assemble(model, u, std::move(lambdas), std::move(R), &anchor);
}

Vec eigenvector_derivative(const SystemModel& model, const Vec& u, int family,
                           const Vec& direction) {
  double nd = direction.norm();
  if (nd == 0.0) return Vec::Zero(model.n);
  Vec d = direction / nd;
  double h = 1e-5 * (1.0 + u.norm());
  SpectralData base = decompose(model, u);
  SpectralData plus = decompose(model, u + h * d, &base);
  SpectralData minus = decompose(model, u - h * d, &base);
  return (plus.right_vecs.col(family) - minus.right_vecs.col(family)) * (nd / (2.0 * h));
}

Vec tw_correction_numerator(const SystemModel& model, const Vec& u, int family) {
  SpectralData sd = decompose(model, u);
  Vec ri = sd.r(family);
  Mat B = model.eval_B(u);
  Vec riu_ri = eigenvector_derivative(model, u, family, ri);  // r_{i,u} r_i
  Mat DBri = matrix_directional_derivative(model.eval_B, u, ri);
  return B * riu_ri + DBri * ri;
}

Vec first_order_tw_correction(const SystemModel& model, const Vec& u, int family,
                              double sigma) {
  SpectralData sd = decompose(model, u);
  if (std::abs(sigma - sd.lambdas[family]) > 0.25 * model.c0_claimed + 1e-12)
    throw Error("first_order_tw_correction: sigma too far from lambda_i");
  Vec g = tw_correction_numerator(model, u, family);
  Vec c = Vec::Zero(model.n);
  for (int j = 0; j < model.n; ++j) {
    if (j == family) continue;
    double denom = (sd.lambdas[j] - sigma) -
                   2.0 * sd.mus[j] / sd.mus[family] * (sd.lambdas[family] - sigma);
    if (std::abs(denom) < 0.25 * model.c0_claimed)
      throw ResonantDenominator("family " + std::to_string(j) + " denom " +
                                std::to_string(denom));
    c[j] = sd.l(j).dot(g) / denom;
  }
  return c;
}

}  // namespace vvlab
