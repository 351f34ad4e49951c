#include "vvlab/travelling_waves.hpp"

#include <cmath>

namespace vvlab {

RHSpeed rh_speed(const SystemModel& model, const Vec& u_minus, const Vec& u_plus) {
  if (!model.eval_flux) throw NoFlux(model.name);
  Vec du = u_plus - u_minus;
  if (du.norm() == 0.0) throw Error("rh_speed: u_- = u_+");
  const FluxFn& f = *model.eval_flux;
  Vec df = f(u_plus) - f(u_minus);
  RHSpeed out;
  out.sigma = df.dot(du) / du.squaredNorm();  // exact for n = 1
  out.residual = (df - out.sigma * du).norm();
  return out;
}

namespace {

// One adaptive RK4 advance of du/dxi = G(u) from xi to xi+h (step doubling).
Vec rk4_cell(const std::function<Vec(const Vec&)>& G, Vec u, double h, double tol) {
  auto rk4 = [&](const Vec& y, double dh) {
    Vec k1 = G(y);
    Vec k2 = G(y + 0.5 * dh * k1);
    Vec k3 = G(y + 0.5 * dh * k2);
    Vec k4 = G(y + dh * k3);
    return Vec(y + dh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };
  int nsub = 1;
  while (nsub <= 1 << 16) {
    Vec coarse = u;
    double dh = h / nsub;
    for (int s = 0; s < nsub; ++s) coarse = rk4(coarse, dh);
    Vec fine = u;
    dh = h / (2 * nsub);
    for (int s = 0; s < 2 * nsub; ++s) fine = rk4(fine, dh);
    if ((fine - coarse).lpNorm<Eigen::Infinity>() <= tol * (1.0 + fine.lpNorm<Eigen::Infinity>()))
      return fine;
    nsub *= 2;
  }
  throw Error("rk4_cell: step control failed");
}

}  // namespace

TravellingWaveProfile profile_conservative(const SystemModel& model, const Vec& u_minus,
                                           const Vec& u_plus, double sigma, double xi_span,
                                           int M) {
  if (!model.eval_flux) throw NoFlux(model.name);
  if (M < 3) throw Error("profile_conservative: M >= 3");
  const FluxFn& flux = *model.eval_flux;

  TravellingWaveProfile prof;
  prof.sigma = sigma;
  prof.u_minus = u_minus;
  prof.u_plus = u_plus;
  prof.xi_grid.resize(M);
  prof.U.resize(model.n, M);
  prof.Uprime.resize(model.n, M);
  double h = 2.0 * xi_span / (M - 1);
  for (int j = 0; j < M; ++j) prof.xi_grid[j] = -xi_span + j * h;

  double jump = (u_plus - u_minus).lpNorm<Eigen::Infinity>();
  Vec f_minus = flux(u_minus);
  auto G = [&](const Vec& u) -> Vec {
    return model.eval_B(u).lu().solve(flux(u) - f_minus - sigma * (u - u_minus));
  };

  if (jump == 0.0) {
    for (int j = 0; j < M; ++j) {
      prof.U.col(j) = u_minus;
      prof.Uprime.col(j).setZero();
    }
    return prof;
  }

  RHSpeed rh = rh_speed(model, u_minus, u_plus);
  if ((flux(u_plus) - f_minus - sigma * (u_plus - u_minus)).norm() > 1e-10 * (1.0 + jump))
    throw Error("profile_conservative: Rankine-Hugoniot residual too large (sigma=" +
                std::to_string(sigma) + ", rh=" + std::to_string(rh.sigma) + ")");

  const int mid = (M - 1) / 2;
  prof.U.col(mid) = 0.5 * (u_minus + u_plus);
  double escape = 4.0 * jump + 1.0;
  for (int j = mid; j + 1 < M; ++j) {
    prof.U.col(j + 1) = rk4_cell(G, prof.U.col(j), h, 1e-12);
    if ((prof.U.col(j + 1) - u_plus).lpNorm<Eigen::Infinity>() > escape)
      throw NoConnection("forward orbit escaped");
  }
  for (int j = mid; j > 0; --j) {
    prof.U.col(j - 1) = rk4_cell(G, prof.U.col(j), -h, 1e-12);
    if ((prof.U.col(j - 1) - u_minus).lpNorm<Eigen::Infinity>() > escape)
      throw NoConnection("backward orbit escaped");
  }
  for (int j = 0; j < M; ++j) prof.Uprime.col(j) = G(prof.U.col(j));

  double endpoint_tol = 1e-6 * jump;
  double em = (prof.U.col(0) - u_minus).lpNorm<Eigen::Infinity>();
  double ep = (prof.U.col(M - 1) - u_plus).lpNorm<Eigen::Infinity>();
  if (em > endpoint_tol || ep > endpoint_tol)
    throw NoConnection("endpoint residuals " + std::to_string(em) + ", " + std::to_string(ep));
  return prof;
}

ProfileOdeState profile_ode_rhs(const SystemModel& model, const Vec& u, const Vec& v,
                                double sigma) {
  ProfileOdeState out;
  out.u = v;
  Mat B = model.eval_B(u);
  Mat A = model.eval_A(u);
  Mat DBv = matrix_directional_derivative(model.eval_B, u, v);  // v . DB(u)
  out.v = B.lu().solve((A - sigma * Mat::Identity(model.n, model.n)) * v - DBv * v);
  out.sigma = 0.0;
  return out;
}

ProfileReport verify_profile(const SystemModel& model, const TravellingWaveProfile& profile,
                             DecompositionMode mode) {
  const int M = static_cast<int>(profile.xi_grid.size());
  const int n = model.n;
  const double h = profile.xi_grid[1] - profile.xi_grid[0];
  ProfileReport rep;

  Mat Up = profile.Uprime;
  if (Up.size() == 0) {
    Up.resize(n, M);
    for (int j = 1; j + 1 < M; ++j)
      Up.col(j) = (profile.U.col(j + 1) - profile.U.col(j - 1)) / (2.0 * h);
    Up.col(0) = Up.col(1);
    Up.col(M - 1) = Up.col(M - 2);
  }

  Mat BUp(n, M);
  for (int j = 0; j < M; ++j) BUp.col(j) = model.eval_B(profile.U.col(j)) * Up.col(j);

  for (int j = 1; j + 1 < M; ++j) {
    Vec lhs = model.eval_A(profile.U.col(j)) * Up.col(j) - profile.sigma * Up.col(j);
    Vec rhs = (BUp.col(j + 1) - BUp.col(j - 1)) / (2.0 * h);
    rep.max_ode_residual =
        std::max(rep.max_ode_residual, (lhs - rhs).lpNorm<Eigen::Infinity>());
  }
  rep.endpoint_minus = (profile.U.col(0) - profile.u_minus).lpNorm<Eigen::Infinity>();
  rep.endpoint_plus = (profile.U.col(M - 1) - profile.u_plus).lpNorm<Eigen::Infinity>();

  // Decompose U' in the (orientation-continued) eigenbasis and check the
  // profile identity v_i,xi = mu_i^-1 (lambda~_i - sigma) v_i.
  Mat v(n, M), lam_tilde(n, M), mus(n, M);
  SpectralData prev = decompose(model, profile.U.col(0));
  for (int j = 0; j < M; ++j) {
    SpectralData sd = decompose(model, profile.U.col(j), &prev);
    for (int i = 0; i < n; ++i) {
      v(i, j) = sd.l(i).dot(Up.col(j));
      mus(i, j) = sd.mus[i];
      lam_tilde(i, j) = sd.lambdas[i];
      if (mode == DecompositionMode::Travelling1) {
        Vec g = tw_correction_numerator(model, profile.U.col(j), i);
        lam_tilde(i, j) -= v(i, j) * sd.l(i).dot(g);
      }
    }
    prev = sd;
  }
  for (int j = 1; j + 1 < M; ++j) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(v(i, j)) <= 1e-6) continue;
      double vxi = (v(i, j + 1) - v(i, j - 1)) / (2.0 * h);
      double res = std::abs(vxi - (lam_tilde(i, j) - profile.sigma) * v(i, j) / mus(i, j));
      rep.max_identity_residual = std::max(rep.max_identity_residual, res);
    }
  }
  return rep;
}

bool oleinik_admissible(const FluxFn& flux, double u_minus, double u_plus, int samples) {
  Vec um = Vec::Constant(1, u_minus), up = Vec::Constant(1, u_plus);
  double du = u_plus - u_minus;
  if (du == 0.0) return true;
  double fm = flux(um)[0], fp = flux(up)[0];
  double sigma = (fm - fp) / (u_minus - u_plus);
  double tol = 1e-12 * (1.0 + std::abs(sigma));
  for (int k = 1; k < samples; ++k) {
    double u = u_minus + du * k / samples;
    double fu = flux(Vec::Constant(1, u))[0];
    double left = (fu - fm) / (u - u_minus);
    double right = (fu - fp) / (u - u_plus);
    if (left < sigma - tol || right > sigma + tol) return false;
  }
  return true;
}

}  // namespace vvlab
