#include "vvlab/wave_decomposition.hpp"

#include <cmath>

namespace vvlab {

namespace {

// C^3 bridge, 0 -> 1 over [0, 1].
double smoothstep7(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double t2 = t * t;
  return t2 * t2 * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t2 * t);
}

double smoothstep7_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double a = t * (1.0 - t);
  return 140.0 * a * a * a;
}

// Cubic ramp pieces for the theta bridge.
double cubic_ramp(double t) { return t * t * (3.0 - 2.0 * t); }          // H
double cubic_ramp_prime(double t) { return 6.0 * t * (1.0 - t); }        // H'
double cubic_ramp_int(double t) { return t * t * t - 0.5 * t * t * t * t; }  // int H

}  // namespace

// theta rises past d1 with slope easing 1 -> 0 over width 0.4 d1, then
// descends at slope -1 (C^1 ramps of relative width 0.25 on each end of the
// descent) and lands at 0 exactly at 3 d1. Peak 1.2 d1, max |theta''| =
// 3.75/d1, both inside the required bounds.
double theta(double s, double delta1) {
  double as = std::abs(s), sign = s < 0 ? -1.0 : 1.0;
  const double d = delta1;
  if (as <= d) return s;
  if (as >= 3.0 * d) return 0.0;
  const double a = 0.4 * d, b = 1.6 * d, r = 0.25, peak = 1.2 * d;
  double val;
  if (as <= d + a) {
    double tau = (as - d) / a;
    val = d + a * (tau - cubic_ramp_int(tau));
  } else {
    double t = (as - d - a) / b;
    if (t <= r) {
      val = peak - b * r * cubic_ramp_int(t / r);
    } else if (t <= 1.0 - r) {
      val = peak - b * r * 0.5 - b * (t - r);
    } else {
      val = b * r * cubic_ramp_int((1.0 - t) / r);
    }
  }
  return sign * val;
}

double theta_prime(double s, double delta1) {
  double as = std::abs(s);
  const double d = delta1;
  if (as <= d) return 1.0;
  if (as >= 3.0 * d) return 0.0;
  const double a = 0.4 * d, b = 1.6 * d, r = 0.25;
  if (as <= d + a) return 1.0 - cubic_ramp((as - d) / a);
  double t = (as - d - a) / b;
  if (t <= r) return -cubic_ramp(t / r);
  if (t <= 1.0 - r) return -1.0;
  return -cubic_ramp((1.0 - t) / r);
}

double theta_second(double s, double delta1) {
  double as = std::abs(s), sign = s < 0 ? -1.0 : 1.0;
  const double d = delta1;
  if (as <= d || as >= 3.0 * d) return 0.0;
  const double a = 0.4 * d, b = 1.6 * d, r = 0.25;
  double val;
  if (as <= d + a) {
    val = -cubic_ramp_prime((as - d) / a) / a;
  } else {
    double t = (as - d - a) / b;
    if (t <= r)
      val = -cubic_ramp_prime(t / r) / (r * b);
    else if (t <= 1.0 - r)
      val = 0.0;
    else
      val = cubic_ramp_prime((1.0 - t) / r) / (r * b);
  }
  return sign * val;
}

double eta(double s) {
  double as = std::abs(s);
  if (as <= 0.75) return 1.0;
  if (as >= 0.8) return 0.0;
  return 1.0 - smoothstep7((as - 0.75) / 0.05);
}

double xi(double s, double delta1) {
  double as = std::abs(s);
  if (as <= 0.5 * delta1) return 1.0;
  if (as >= delta1) return 0.0;
  return 1.0 - smoothstep7((as - 0.5 * delta1) / (0.5 * delta1));
}

double xi_prime(double s, double delta1) {
  double as = std::abs(s);
  if (as <= 0.5 * delta1 || as >= delta1) return 0.0;
  double d = -smoothstep7_prime((as - 0.5 * delta1) / (0.5 * delta1)) / (0.5 * delta1);
  return s < 0 ? -d : d;
}

double chi(double s) {
  double as = std::abs(s);
  if (as <= 1.0) return 0.0;
  if (as >= 2.0) return 1.0;
  return smoothstep7(as - 1.0);
}

double eta_tilde(double s, double delta1) {
  double as = std::abs(s);
  double lo = delta1 / 3.0, hi = 3.0 * delta1 / 8.0;
  if (as <= lo) return 0.0;
  if (as >= hi) return 1.0;
  return smoothstep7((as - lo) / (hi - lo));
}

double eta_bar(double s, double delta1) {
  return eta_tilde(std::abs(s) - delta1 / 24.0, delta1);
}

GridField WaveComponents::component(const Mat& data, int family) const {
  GridField f;
  f.x0 = x0;
  f.h = h;
  f.M = M();
  f.time = time;
  f.boundary = boundary;
  f.values = data.row(family);
  return f;
}

namespace {

struct PointBasis {
  SpectralData sd;
  Mat G;  // G(j, i) = <l_j, g_i>, g_i = B r_{i,u} r_i + r_i . DB r_i
};

double safe_ratio(double w, double v, double v_floor) {
  return std::abs(v) < v_floor ? 0.0 : w / v;
}

// Cutoff block at one point for given amplitudes.
struct CutoffState {
  Vec ratio, sigma, xiv, chiv, etav, vbar;
};

CutoffState cutoffs_at(const Vec& v, const Vec& w, const Vec& lambda_star,
                       const CutoffParams& p) {
  const int n = static_cast<int>(v.size());
  CutoffState c;
  c.ratio.resize(n);
  c.sigma.resize(n);
  c.xiv.resize(n);
  c.chiv.resize(n);
  c.etav.resize(n);
  c.vbar.resize(n);
  for (int i = 0; i < n; ++i) {
    c.ratio[i] = safe_ratio(w[i], v[i], p.v_floor);
    c.sigma[i] = lambda_star[i] - theta(c.ratio[i], p.delta1);
    c.xiv[i] = xi(c.ratio[i], p.delta1);
    c.chiv[i] = chi(std::pow(v[i] * v[i], p.N) / p.epsilon_cut);
    double prod = 1.0;
    double denom = std::max(std::abs(v[i]), p.v_floor);
    for (int j = 0; j < n; ++j)
      if (j != i) prod *= eta(v[j] * v[j] / denom);
    c.etav[i] = prod;
    c.vbar[i] = v[i] * c.chiv[i] * c.etav[i];
  }
  return c;
}

// c_j(u, sigma) coefficients of family i's first-order basis correction,
// from precomputed spectral data and projections.
Vec tw_coeffs(const PointBasis& pb, int family, double sigma, double c0) {
  const int n = static_cast<int>(pb.sd.lambdas.size());
  Vec c = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (j == family) continue;
    double denom = (pb.sd.lambdas[j] - sigma) -
                   2.0 * pb.sd.mus[j] / pb.sd.mus[family] * (pb.sd.lambdas[family] - sigma);
    if (std::abs(denom) < 0.25 * c0)
      throw ResonantDenominator("family " + std::to_string(j));
    c[j] = pb.G(j, family) / denom;
  }
  return c;
}

Vec r_tilde(const PointBasis& pb, int family, double basis_amplitude, double sigma,
            double c0) {
  Vec r = pb.sd.r(family);
  if (basis_amplitude == 0.0) return r;
  Vec c = tw_coeffs(pb, family, sigma, c0);
  for (int j = 0; j < static_cast<int>(r.size()); ++j)
    if (j != family) r += basis_amplitude * c[j] * pb.sd.r(j);
  return r;
}

// Nonlinear residual of the travelling1 decomposition at one point.
Vec residual_tw(const PointBasis& pb, const Vec& vw, const Vec& ux, const Vec& ut,
                const Vec& lambda_star, const CutoffParams& p, double c0) {
  const int n = static_cast<int>(ux.size());
  Vec v = vw.head(n), w = vw.tail(n);
  CutoffState c = cutoffs_at(v, w, lambda_star, p);
  Vec f1 = -ux, f2 = -ut;
  for (int i = 0; i < n; ++i) {
    Vec rt = r_tilde(pb, i, c.xiv[i] * c.vbar[i], c.sigma[i], c0);
    f1 += v[i] * rt;
    f2 += (w[i] - lambda_star[i] * v[i]) * rt;
  }
  Vec out(2 * n);
  out << f1, f2;
  return out;
}

}  // namespace

WaveComponents decompose_field(const SystemModel& model, const GridField& field,
                               const GridField& ut_field, const CutoffParams& params,
                               DecompositionMode mode) {
  const int n = field.n(), M = field.M;
  GridField ux = derivative(field, 1);

  WaveComponents comps;
  comps.mode = mode;
  comps.x0 = field.x0;
  comps.h = field.h;
  comps.time = field.time;
  comps.boundary = field.boundary;
  comps.params = params;
  comps.u_star = (field.boundary == Boundary::Periodic) ? model.u_star
                                                        : Vec(field.values.col(0));
  SpectralData star = decompose(model, comps.u_star);
  comps.lambda_star = star.lambdas;

  comps.v.resize(n, M);
  comps.w.resize(n, M);
  comps.sigma.resize(n, M);
  comps.vbar.resize(n, M);
  comps.lambda_tilde.resize(n, M);
  comps.xi_val.resize(n, M);
  comps.chi_val.resize(n, M);
  comps.eta_val.resize(n, M);
  comps.mu.resize(n, M);
  comps.lambda.resize(n, M);
  comps.z.setZero(n, M);
  comps.zhat.setZero(n, M);
  comps.recon_residual.resize(M);
  comps.basis_proj.assign(M, Mat());

  const bool travelling = (mode == DecompositionMode::Travelling1);
  if (travelling) {
    GridField uxx = derivative(field, 2);
    double threshold = params.small_data_factor * model.c0_claimed;
    double mx = ux.values.cwiseAbs().maxCoeff();
    double mxx = uxx.values.cwiseAbs().maxCoeff();
    if (mx > threshold || mxx > threshold)
      throw DataTooLarge("|u_x|=" + std::to_string(mx) + " |u_xx|=" + std::to_string(mxx) +
                         " threshold=" + std::to_string(threshold));
  }

  for (int jcell = 0; jcell < M; ++jcell) {
    Vec u = field.values.col(jcell);
    Vec uxj = ux.values.col(jcell);
    Vec utj = ut_field.values.col(jcell);

    PointBasis pb;
    pb.sd = decompose(model, u, &star);
    if (travelling) {
      pb.G.resize(n, n);
      for (int i = 0; i < n; ++i) {
        Vec g = tw_correction_numerator(model, u, i);
        for (int j = 0; j < n; ++j) pb.G(j, i) = pb.sd.l(j).dot(g);
      }
    } else {
      pb.G = Mat::Zero(n, n);
    }

    // Eigenbasis solve; exact for eigenbasis mode, initial guess otherwise.
    Vec v = pb.sd.P * uxj;
    Vec w = pb.sd.P * utj;
    for (int i = 0; i < n; ++i) w[i] += comps.lambda_star[i] * v[i];

    if (travelling) {
      Vec vw(2 * n);
      vw << v, w;
      double scale = 1.0 + uxj.lpNorm<Eigen::Infinity>() + utj.lpNorm<Eigen::Infinity>();
      Vec f = residual_tw(pb, vw, uxj, utj, comps.lambda_star, params, model.c0_claimed);
      int iter = 0;
      while (f.lpNorm<Eigen::Infinity>() > params.newton_tol * scale) {
        if (++iter > 50) throw NewtonDivergence("cell " + std::to_string(jcell));
        Mat J(2 * n, 2 * n);
        for (int k = 0; k < 2 * n; ++k) {
          double hk = 1e-7 * (1.0 + std::abs(vw[k]));
          Vec vp = vw, vm = vw;
          vp[k] += hk;
          vm[k] -= hk;
          J.col(k) = (residual_tw(pb, vp, uxj, utj, comps.lambda_star, params,
                                  model.c0_claimed) -
                      residual_tw(pb, vm, uxj, utj, comps.lambda_star, params,
                                  model.c0_claimed)) /
                     (2.0 * hk);
        }
        Vec delta = J.fullPivLu().solve(-f);
        double alpha = 1.0;
        double f0 = f.lpNorm<Eigen::Infinity>();
        while (alpha > 1e-6) {
          Vec trial = vw + alpha * delta;
          Vec ftrial =
              residual_tw(pb, trial, uxj, utj, comps.lambda_star, params, model.c0_claimed);
          if (ftrial.lpNorm<Eigen::Infinity>() < f0) {
            vw = trial;
            f = ftrial;
            break;
          }
          alpha *= 0.5;
        }
        if (alpha <= 1e-6) throw NewtonDivergence("damping stalled at cell " +
                                                  std::to_string(jcell));
      }
      v = vw.head(n);
      w = vw.tail(n);
    }

    CutoffState c = cutoffs_at(v, w, comps.lambda_star, params);
    Vec recon = -uxj;
    for (int i = 0; i < n; ++i) {
      comps.v(i, jcell) = v[i];
      comps.w(i, jcell) = w[i];
      comps.sigma(i, jcell) = c.sigma[i];
      comps.vbar(i, jcell) = c.vbar[i];
      comps.xi_val(i, jcell) = c.xiv[i];
      comps.chi_val(i, jcell) = c.chiv[i];
      comps.eta_val(i, jcell) = c.etav[i];
      comps.mu(i, jcell) = pb.sd.mus[i];
      comps.lambda(i, jcell) = pb.sd.lambdas[i];
      comps.lambda_tilde(i, jcell) =
          travelling ? pb.sd.lambdas[i] - v[i] * pb.G(i, i) : pb.sd.lambdas[i];
      recon += v[i] * r_tilde(pb, i, travelling ? c.xiv[i] * c.vbar[i] : 0.0, c.sigma[i],
                              model.c0_claimed);
    }
    comps.recon_residual[jcell] = recon.lpNorm<Eigen::Infinity>();
    comps.basis_proj[jcell] = pb.G;
  }
  return comps;
}

void effective_fluxes(WaveComponents& comps, const SystemModel& model,
                      const GridField& field, const CutoffParams& params) {
  const int n = comps.n(), M = comps.M();
  (void)field;
  Mat vx(n, M), wx(n, M);
  for (int i = 0; i < n; ++i) {
    vx.row(i) = derivative(comps.component(comps.v, i), 1).values.row(0);
    wx.row(i) = derivative(comps.component(comps.w, i), 1).values.row(0);
  }

  const bool travelling = (comps.mode == DecompositionMode::Travelling1);
  for (int p = 0; p < M; ++p) {
    for (int i = 0; i < n; ++i) {
      double zi = comps.mu(i, p) * vx(i, p) -
                  (comps.lambda_tilde(i, p) - comps.lambda_star[i]) * comps.v(i, p);
      double zhi = comps.mu(i, p) * wx(i, p) -
                   (comps.lambda_tilde(i, p) - comps.lambda_star[i]) * comps.w(i, p);
      if (travelling) {
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          double ratio_j = safe_ratio(comps.w(j, p), comps.v(j, p), params.v_floor);
          double sigma_j = comps.sigma(j, p);
          double vbar_j = comps.vbar(j, p);
          // psi_ji(u, s, sigma_j) = s c_i(u, sigma_j), s = xi_j vbar_j
          double denom_ij = (comps.lambda(i, p) - sigma_j) -
                            2.0 * comps.mu(i, p) / comps.mu(j, p) *
                                (comps.lambda(j, p) - sigma_j);
          if (std::abs(denom_ij) < 0.25 * model.c0_claimed)
            throw ResonantDenominator("effective_fluxes pair (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
          double ci = comps.basis_proj[p](i, j) / denom_ij;
          double hs = 1e-5 * (1.0 + std::abs(sigma_j));
          auto ci_at = [&](double s) {
            double d = (comps.lambda(i, p) - s) -
                       2.0 * comps.mu(i, p) / comps.mu(j, p) * (comps.lambda(j, p) - s);
            return comps.basis_proj[p](i, j) / d;
          };
          double dci_dsigma = (ci_at(sigma_j + hs) - ci_at(sigma_j - hs)) / (2.0 * hs);
          double psi_v = ci;
          double psi_sigma = comps.xi_val(j, p) * vbar_j * dci_dsigma;
          double b_ij = xi_prime(ratio_j, params.delta1) * vbar_j * psi_v - psi_sigma;
          double psi_ji = comps.xi_val(j, p) * vbar_j * ci;
          double bhat_ij =
              psi_ji +
              ((comps.lambda_star[i] - comps.lambda_star[j]) + ratio_j) * b_ij;
          double coupling = wx(j, p) - ratio_j * vx(j, p);
          zi += comps.mu(i, p) * b_ij * coupling;
          zhi += comps.mu(i, p) * bhat_ij * coupling;
        }
      }
      comps.z(i, p) = zi;
      comps.zhat(i, p) = zhi;
    }
  }
}

LambdaTerms lambda_terms(const WaveComponents& comps, const CutoffParams& params) {
  const int n = comps.n(), M = comps.M();
  LambdaTerms lt;
  auto zero = [&](Mat& m) { m.setZero(n, M); };
  zero(lt.l1);
  zero(lt.l2);
  zero(lt.l3);
  zero(lt.l4);
  zero(lt.l5);
  zero(lt.l6);
  zero(lt.l61);
  zero(lt.l7);
  zero(lt.l8);

  Mat vx(n, M), vxx(n, M), vxxx(n, M), wx(n, M), wxx(n, M), wxxx(n, M), zx(n, M), zhx(n, M);
  for (int i = 0; i < n; ++i) {
    GridField vi = comps.component(comps.v, i), wi = comps.component(comps.w, i);
    vx.row(i) = derivative(vi, 1).values.row(0);
    vxx.row(i) = derivative(vi, 2).values.row(0);
    vxxx.row(i) = derivative(vi, 3).values.row(0);
    wx.row(i) = derivative(wi, 1).values.row(0);
    wxx.row(i) = derivative(wi, 2).values.row(0);
    wxxx.row(i) = derivative(wi, 3).values.row(0);
    zx.row(i) = derivative(comps.component(comps.z, i), 1).values.row(0);
    zhx.row(i) = derivative(comps.component(comps.zhat, i), 1).values.row(0);
  }

  for (int p = 0; p < M; ++p) {
    for (int i = 0; i < n; ++i) {
      double vi = comps.v(i, p), wi = comps.w(i, p);
      double ratio = safe_ratio(wi, vi, params.v_floor);
      double self = std::abs(vi) + std::abs(vx(i, p)) + std::abs(vxx(i, p)) + std::abs(wi) +
                    std::abs(wx(i, p)) + std::abs(wxx(i, p));
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        lt.l1(i, p) += (std::abs(comps.v(j, p)) + std::abs(vx(j, p)) +
                        std::abs(comps.w(j, p)) + std::abs(wx(j, p)) + std::abs(vxx(j, p)) +
                        std::abs(wxx(j, p))) *
                       self;
        lt.l2(i, p) += (std::abs(vxxx(j, p)) + std::abs(wxxx(j, p))) *
                       (std::abs(comps.w(j, p)) + std::abs(comps.v(j, p))) * std::abs(vi);
        lt.l7(i, p) +=
            (std::abs(comps.z(i, p)) + std::abs(comps.zhat(i, p))) *
                (std::abs(comps.v(j, p)) + std::abs(comps.w(j, p)) + std::abs(vx(j, p)) +
                 std::abs(wx(j, p)) + std::abs(comps.z(j, p)) + std::abs(comps.zhat(j, p))) +
            (std::abs(zx(i, p)) + std::abs(zhx(i, p))) *
                (std::abs(comps.v(j, p)) + std::abs(comps.w(j, p)) +
                 std::abs(comps.z(j, p)) + std::abs(comps.zhat(j, p)));
      }
      // (w/v)_x by the product rule on the stencil derivatives
      double rx = std::abs(vi) < params.v_floor
                      ? 0.0
                      : (wx(i, p) * vi - wi * vx(i, p)) / (vi * vi);
      bool small_ratio = std::abs(ratio) <= 3.0 * params.delta1;
      bool chi_on = std::pow(vi * vi, params.N) >= params.epsilon_cut;
      lt.l3(i, p) = (small_ratio && chi_on) ? std::abs(vi) * rx * rx : 0.0;
      lt.l4(i, p) = std::abs(wx(i, p) * vi - wi * vx(i, p));
      lt.l5(i, p) = std::abs(wxx(i, p) * vi - wi * vxx(i, p));
      bool big_ratio = std::abs(ratio) >= 0.5 * params.delta1;
      lt.l6(i, p) = big_ratio ? vx(i, p) * vx(i, p) : 0.0;
      lt.l61(i, p) = big_ratio ? wx(i, p) * wx(i, p) : 0.0;
      lt.l8(i, p) = std::abs(comps.z(i, p) * wx(i, p) - wi * zx(i, p)) +
                    std::abs(comps.z(i, p) * vx(i, p) - vi * zx(i, p)) +
                    std::abs(comps.zhat(i, p) * wx(i, p) - wi * zhx(i, p)) +
                    std::abs(comps.zhat(i, p) * vx(i, p) - vi * zhx(i, p));
    }
  }

  auto norms = [&](const Mat& m) {
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = comps.h * m.row(i).cwiseAbs().sum();
    return out;
  };
  lt.n1 = norms(lt.l1);
  lt.n2 = norms(lt.l2);
  lt.n3 = norms(lt.l3);
  lt.n4 = norms(lt.l4);
  lt.n5 = norms(lt.l5);
  lt.n6 = norms(lt.l6);
  lt.n61 = norms(lt.l61);
  lt.n7 = norms(lt.l7);
  lt.n8 = norms(lt.l8);
  return lt;
}

DiagonalResiduals diagonal_residuals(const SystemModel& model,
                                     const std::vector<WaveComponents>& snapshots,
                                     const std::vector<double>& times,
                                     const CutoffParams& params, double delta0) {
  (void)model;
  if (snapshots.size() < 2 || snapshots.size() != times.size())
    throw Error("diagonal_residuals: need 2 or 3 consecutive snapshots with times");
  const bool centered = snapshots.size() >= 3;
  const WaveComponents& eval = centered ? snapshots[1] : snapshots[0];
  const WaveComponents& lo = snapshots[0];
  const WaveComponents& hi = centered ? snapshots[2] : snapshots[1];
  const double dt = centered ? times[2] - times[0] : times[1] - times[0];

  const int n = eval.n(), M = eval.M();
  DiagonalResiduals out;
  out.t = centered ? times[1] : times[0];
  out.phi.resize(n, M);
  out.psi.resize(n, M);
  out.Phi.resize(n, M);
  out.Psi.resize(n, M);

  auto residual_row = [&](const Mat& q_lo, const Mat& q_hi, const Mat& q_eval,
                          int i) -> Eigen::RowVectorXd {
    GridField qf = eval.component(q_eval, i);
    GridField adv = qf;  // lambda~_i q
    adv.values = (eval.lambda_tilde.row(i).array() * q_eval.row(i).array()).matrix();
    GridField qx = derivative(qf, 1);
    GridField diff = qf;  // mu_i q_x
    diff.values = (eval.mu.row(i).array() * qx.values.row(0).array()).matrix();
    Eigen::RowVectorXd qt = (q_hi.row(i) - q_lo.row(i)) / dt;
    return qt + derivative(adv, 1).values.row(0) - derivative(diff, 1).values.row(0);
  };

  for (int i = 0; i < n; ++i) {
    out.phi.row(i) = residual_row(lo.v, hi.v, eval.v, i);
    out.psi.row(i) = residual_row(lo.w, hi.w, eval.w, i);
    out.Phi.row(i) = residual_row(lo.z, hi.z, eval.z, i);
    out.Psi.row(i) = residual_row(lo.zhat, hi.zhat, eval.zhat, i);
  }

  auto l1 = [&](const Mat& m) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = eval.h * m.row(i).cwiseAbs().sum();
    return v;
  };
  out.phi_l1 = l1(out.phi);
  out.psi_l1 = l1(out.psi);
  out.Phi_l1 = l1(out.Phi);
  out.Psi_l1 = l1(out.Psi);

  LambdaTerms lt = lambda_terms(eval, params);
  out.lambda_bound_l1 = (lt.n1 + delta0 * delta0 * lt.n3 + lt.n4 + lt.n5 + lt.n6 + lt.n61).sum();
  double phi_total = out.phi_l1.sum();
  out.ratio_phi = out.lambda_bound_l1 > 0 ? phi_total / out.lambda_bound_l1 : 0.0;
  return out;
}

}  // namespace vvlab
