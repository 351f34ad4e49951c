#include "vvlab/functionals.hpp"

#include <cmath>

namespace vvlab {

namespace {
constexpr int kQuadraticCap = 4096;

void check_cap(int M) {
  if (M > kQuadraticCap)
    throw Error("O(M^2) functional capped at M <= 4096, got M = " + std::to_string(M));
}

void check_same_grid(const GridField& a, const GridField& b) {
  if (a.M != b.M || a.h != b.h || a.x0 != b.x0)
    throw Error("fields must share the grid");
}
}  // namespace

TotalVariation tv(const GridField& field) {
  TotalVariation out;
  out.per_component.assign(field.n(), 0.0);
  for (int c = 0; c < field.n(); ++c)
    for (int j = 0; j + 1 < field.M; ++j)
      out.per_component[c] += std::abs(field.values(c, j + 1) - field.values(c, j));
  for (double v : out.per_component) out.total += v;
  return out;
}

double transversal_kernel(double s, double c, double c1) {
  if (s >= 0.0) return 1.0 / c;
  return std::exp(c * s / (2.0 * c1)) / c;
}

double transversal_q(const GridField& z, const GridField& z_sharp, double c, double c1) {
  check_same_grid(z, z_sharp);
  check_cap(z.M);
  if (c <= 0.0 || c1 <= 0.0) throw Error("transversal_q: c, c1 must be positive");
  const int M = z.M;
  double acc = 0.0;
  for (int j = 0; j < M; ++j) {
    double zj = std::abs(z.values(0, j));
    if (zj == 0.0) continue;
    for (int k = 0; k < M; ++k)
      acc += transversal_kernel((j - k) * z.h, c, c1) * zj * std::abs(z_sharp.values(0, k));
  }
  return z.h * z.h * acc;
}

double area_functional(const GridField& zeta1, const GridField& zeta2) {
  check_same_grid(zeta1, zeta2);
  check_cap(zeta1.M);
  const int M = zeta1.M;
  double acc = 0.0;
  for (int j = 0; j < M; ++j)
    for (int k = j + 1; k < M; ++k)
      acc += std::abs(zeta1.values(0, j) * zeta2.values(0, k) -
                      zeta1.values(0, k) * zeta2.values(0, j));
  return 0.5 * zeta1.h * zeta1.h * acc;
}

double length_functional(const GridField& v, const GridField& w) {
  check_same_grid(v, w);
  double acc = 0.0;
  for (int j = 0; j < v.M; ++j)
    acc += std::hypot(v.values(0, j), w.values(0, j));
  return v.h * acc;
}

DissipationSeries transversal_dissipation_check(const std::vector<TransversalSnapshot>& traj,
                                                double tol_rel) {
  if (traj.size() < 2) throw Error("transversal_dissipation_check: need >= 2 snapshots");
  DissipationSeries out;

  double inf_sharp = std::numeric_limits<double>::infinity();
  double sup_slow = -std::numeric_limits<double>::infinity();
  double max_mux = 0.0, max_mu = 0.0;
  for (const auto& s : traj) {
    inf_sharp = std::min(inf_sharp, s.lambda_sharp.values.minCoeff());
    sup_slow = std::max(sup_slow, s.lambda.values.maxCoeff());
    max_mu = std::max({max_mu, s.mu.values.maxCoeff(), s.mu_sharp.values.maxCoeff()});
    max_mux = std::max({max_mux, derivative(s.mu, 1).values.cwiseAbs().maxCoeff(),
                        derivative(s.mu_sharp, 1).values.cwiseAbs().maxCoeff()});
  }
  double c = (inf_sharp - sup_slow) - 2.0 * max_mux;
  if (c <= 0.0)
    throw GapViolated("inf lambda# - sup lambda - 2||mu_x|| = " + std::to_string(c));
  out.c = c;
  out.c1 = max_mu;

  std::vector<double> q(traj.size());
  for (size_t k = 0; k < traj.size(); ++k)
    q[k] = transversal_q(traj[k].z, traj[k].z_sharp, c, max_mu);
  double qmax = *std::max_element(q.begin(), q.end());
  out.tol = tol_rel * std::max(qmax, 1e-300);

  out.e1 = l1_norm(traj.front().z).total;
  out.e2 = l1_norm(traj.front().z_sharp).total;

  int passed = 0;
  for (size_t k = 0; k + 1 < traj.size(); ++k) {
    const auto& s = traj[k];
    double dt = traj[k + 1].t - s.t;
    double cross = s.z.h * (s.z.values.cwiseAbs().array() *
                            s.z_sharp.values.cwiseAbs().array()).sum();
    double src = (l1_norm(s.z).total * l1_norm(s.phi_sharp).total +
                  l1_norm(s.z_sharp).total * l1_norm(s.phi).total) / c;
    double d = (q[k + 1] - q[k]) / dt + cross - src;
    out.t.push_back(s.t);
    out.value.push_back(q[k]);
    out.residual.push_back(d);
    bool ok = d <= out.tol;
    out.pass.push_back(ok);
    passed += ok ? 1 : 0;
    out.interaction_integral += dt * cross;
    out.e1 += dt * l1_norm(s.phi).total;
    out.e2 += dt * l1_norm(s.phi_sharp).total;
  }
  out.pass_fraction = traj.size() > 1 ? double(passed) / double(traj.size() - 1) : 1.0;
  return out;
}

DissipationSeries area_dissipation_check(const std::vector<AreaSnapshot>& traj,
                                         double tol_rel) {
  if (traj.size() < 2) throw Error("area_dissipation_check: need >= 2 snapshots");
  DissipationSeries out;

  std::vector<double> a(traj.size());
  for (size_t k = 0; k < traj.size(); ++k) a[k] = area_functional(traj[k].v, traj[k].w);
  double amax = *std::max_element(a.begin(), a.end());
  out.tol = tol_rel * std::max(amax, 1e-300);

  int passed = 0;
  for (size_t k = 0; k + 1 < traj.size(); ++k) {
    const auto& s = traj[k];
    double dt = traj[k + 1].t - s.t;
    GridField vx = derivative(s.v, 1), wx = derivative(s.w, 1);
    double wronskian = 0.0;
    for (int j = 0; j < s.v.M; ++j)
      wronskian += s.mu.values(0, j) * std::abs(vx.values(0, j) * s.w.values(0, j) -
                                                s.v.values(0, j) * wx.values(0, j));
    wronskian *= s.v.h;
    double src = l1_norm(s.v).total * l1_norm(s.psi).total +
                 l1_norm(s.w).total * l1_norm(s.phi).total;
    double d = (a[k + 1] - a[k]) / dt + wronskian - src;
    out.t.push_back(s.t);
    out.value.push_back(a[k]);
    out.residual.push_back(d);
    bool ok = d <= out.tol;
    out.pass.push_back(ok);
    passed += ok ? 1 : 0;
  }
  out.pass_fraction = traj.size() > 1 ? double(passed) / double(traj.size() - 1) : 1.0;
  return out;
}

EnergyFunctionals energy_functionals(const WaveComponents& comps, const CutoffParams& params) {
  const int n = comps.n(), M = comps.M();
  EnergyFunctionals ef;
  ef.e_v = Vec::Zero(n);
  ef.e_w = Vec::Zero(n);
  ef.curvature = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    GridField vi = comps.component(comps.v, i), wi = comps.component(comps.w, i);
    GridField vx = derivative(vi, 1), wx = derivative(wi, 1);
    for (int j = 0; j < M; ++j) {
      double v = comps.v(i, j), w = comps.w(i, j);
      double ratio = std::abs(v) < params.v_floor ? 0.0 : w / v;
      ef.e_v[i] += eta_tilde(ratio, params.delta1) * vx.values(0, j) * vx.values(0, j);
      ef.e_w[i] += eta_bar(ratio, params.delta1) * wx.values(0, j) * wx.values(0, j);
      if (std::abs(ratio) <= 3.0 * params.delta1 &&
          std::pow(v * v, params.N) >= params.epsilon_cut) {
        double rx = std::abs(v) < params.v_floor
                        ? 0.0
                        : (wx.values(0, j) * v - w * vx.values(0, j)) / (v * v);
        ef.curvature[i] += std::abs(v) * rx * rx;
      }
    }
    ef.e_v[i] *= comps.h;
    ef.e_w[i] *= comps.h;
    ef.curvature[i] *= comps.h;
  }
  return ef;
}

namespace {

// Monotone cubic (Fritsch-Carlson) slopes for strictly increasing data.
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t m = x.size();
  std::vector<double> d(m - 1), s(m);
  for (size_t k = 0; k + 1 < m; ++k) d[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
  s[0] = d[0];
  s[m - 1] = d[m - 2];
  for (size_t k = 1; k + 1 < m; ++k) s[k] = 0.5 * (d[k - 1] + d[k]);
  for (size_t k = 0; k + 1 < m; ++k) {
    if (d[k] == 0.0) {
      s[k] = s[k + 1] = 0.0;
      continue;
    }
    double a = s[k] / d[k], b = s[k + 1] / d[k];
    double r = a * a + b * b;
    if (r > 9.0) {
      double t = 3.0 / std::sqrt(r);
      s[k] = t * a * d[k];
      s[k + 1] = t * b * d[k];
    }
  }
  return s;
}

double hermite_eval(double xl, double xr, double yl, double yr, double sl, double sr,
                    double x) {
  double hseg = xr - xl, t = (x - xl) / hseg;
  double t2 = t * t, t3 = t2 * t;
  return yl * (2 * t3 - 3 * t2 + 1) + hseg * sl * (t3 - 2 * t2 + t) +
         yr * (-2 * t3 + 3 * t2) + hseg * sr * (t3 - t2);
}

// Cubic Hermite with 4th-order centered slopes; clamps outside the grid.
double resample(const GridField& f, double x) {
  const int M = f.M;
  double pos = (x - f.x0) / f.h;
  if (pos <= 0.0) return f.values(0, 0);
  if (pos >= M - 1) return f.values(0, M - 1);
  int j = static_cast<int>(pos);
  auto slope = [&](int k) {
    return (f.at(k - 2)[0] - 8.0 * f.at(k - 1)[0] + 8.0 * f.at(k + 1)[0] - f.at(k + 2)[0]) /
           (12.0 * f.h);
  };
  return hermite_eval(f.x(j), f.x(j + 1), f.values(0, j), f.values(0, j + 1), slope(j),
                      slope(j + 1), x);
}

}  // namespace

CoordinateMap::CoordinateMap(const GridField& grid_like, const Vec& mus, double floor) {
  const int M = grid_like.M;
  if (static_cast<int>(mus.size()) != M)
    throw Error("CoordinateMap: mus length must match the grid");
  for (int j = 0; j < M; ++j)
    if (!(mus[j] >= floor) || mus[j] <= 0.0)
      throw ViscosityFloorViolated("mu = " + std::to_string(mus[j]) + " at cell " +
                                   std::to_string(j));
  h_ = grid_like.h;
  x_.resize(M);
  Xx_.resize(M);
  for (int j = 0; j < M; ++j) x_[j] = grid_like.x(j);
  // anchor: X(x0) = int_0^{x0}, far field treated as frozen at the left state
  Xx_[0] = x_[0] / std::sqrt(mus[0]);
  for (int j = 1; j < M; ++j)
    Xx_[j] = Xx_[j - 1] + 0.5 * h_ * (1.0 / std::sqrt(mus[j - 1]) + 1.0 / std::sqrt(mus[j]));
  sup_d_ = mus.maxCoeff();
  fwd_slopes_ = monotone_slopes(x_, Xx_);
  inv_slopes_ = monotone_slopes(Xx_, x_);
}

double CoordinateMap::X(double x) const {
  const size_t M = x_.size();
  const auto& s = fwd_slopes_;
  if (x <= x_[0]) return Xx_[0] + (x - x_[0]) * s[0];
  if (x >= x_[M - 1]) return Xx_[M - 1] + (x - x_[M - 1]) * s[M - 1];
  size_t j = static_cast<size_t>((x - x_[0]) / h_);
  if (j >= M - 1) j = M - 2;
  return hermite_eval(x_[j], x_[j + 1], Xx_[j], Xx_[j + 1], s[j], s[j + 1], x);
}

double CoordinateMap::X_inverse(double y) const {
  const size_t M = x_.size();
  const auto& s = inv_slopes_;
  if (y <= Xx_[0]) return x_[0] + (y - Xx_[0]) * s[0];
  if (y >= Xx_[M - 1]) return x_[M - 1] + (y - Xx_[M - 1]) * s[M - 1];
  // X is strictly increasing; locate the segment by bisection.
  size_t lo = 0, hi = M - 1;
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    (Xx_[mid] <= y ? lo : hi) = mid;
  }
  return hermite_eval(Xx_[lo], Xx_[lo + 1], x_[lo], x_[lo + 1], s[lo], s[lo + 1], y);
}

GridField CoordinateMap::apply(const GridField& f) const {
  GridField out = f;
  for (int j = 0; j < f.M; ++j) out.values(0, j) = resample(f, X(f.x(j)));
  return out;
}

GridField CoordinateMap::apply_inverse(const GridField& f) const {
  GridField out = f;
  for (int j = 0; j < f.M; ++j) out.values(0, j) = resample(f, X_inverse(f.x(j)));
  return out;
}

CoordinateMap rescale_coordinates(const GridField& field, int family, const Vec& mus,
                                  double floor) {
  (void)family;
  return CoordinateMap(field, mus, floor);
}

}  // namespace vvlab
