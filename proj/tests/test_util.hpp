#ifndef VVLAB_TEST_UTIL_HPP
#define VVLAB_TEST_UTIL_HPP

#include <cmath>
#include <functional>
#include <random>

#include "vvlab/experiments.hpp"

namespace vvlab::test {

inline GridField make_field(double xmin, double xmax, int M, int n,
                            const std::function<Vec(double)>& f,
                            Boundary boundary = Boundary::ConstantExtrapolation) {
  GridField g;
  g.M = M;
  g.h = (xmax - xmin) / M;
  g.x0 = xmin + 0.5 * g.h;
  g.boundary = boundary;
  g.values.resize(n, M);
  for (int j = 0; j < M; ++j) g.values.col(j) = f(g.x(j));
  return g;
}

inline GridField make_scalar_field(double xmin, double xmax, int M,
                                   const std::function<double(double)>& f,
                                   Boundary boundary = Boundary::ConstantExtrapolation) {
  return make_field(xmin, xmax, M, 1, [&](double x) { return Vec::Constant(1, f(x)); },
                    boundary);
}

// Fixed-eigenvalue system in a rotating orthonormal frame, angle 0.2(u1+u2):
// a commuting pair whose eigenvectors genuinely depend on u.
inline SystemModel rotating_frame_system() {
  auto rot = [](const Vec& u) {
    double a = 0.2 * (u[0] + u[1]);
    Mat R(2, 2);
    R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return R;
  };
  SystemModel m;
  m.name = "rotating2";
  m.n = 2;
  m.eval_A = [rot](const Vec& u) {
    Mat R = rot(u);
    Vec d(2);
    d << 0.0, 2.0;
    return Mat(R * d.asDiagonal() * R.transpose());
  };
  m.eval_B = [rot](const Vec& u) {
    Mat R = rot(u);
    Vec d(2);
    d << 1.0, 2.0;
    return Mat(R * d.asDiagonal() * R.transpose());
  };
  m.state_box = {{-0.3, 0.3}, {-0.3, 0.3}};
  m.c0_claimed = 2.0;
  m.c1_claimed = 1.0;
  m.u_star = Vec::Zero(2);
  return m;
}

// Scalar linear advection-diffusion u_t + a u_x = mu u_xx.
inline SystemModel advection_system(double a, double mu) {
  SystemModel m;
  m.name = "advect";
  m.n = 1;
  m.eval_A = [a](const Vec&) { return Mat::Constant(1, 1, a); };
  m.eval_B = [mu](const Vec&) { return Mat::Constant(1, 1, mu); };
  m.eval_flux = [a](const Vec& u) { return Vec::Constant(1, a * u[0]); };
  m.state_box = {{-10.0, 10.0}};
  m.c0_claimed = 1.0;
  m.c1_claimed = mu;
  m.u_star = Vec::Zero(1);
  return m;
}

// Scalar cubic-flux system f = u^3 (A = 3u^2).
inline SystemModel cubic_system() {
  SystemModel m;
  m.name = "cubic";
  m.n = 1;
  m.eval_A = [](const Vec& u) { return Mat::Constant(1, 1, 3.0 * u[0] * u[0]); };
  m.eval_B = [](const Vec&) { return Mat::Identity(1, 1); };
  m.eval_flux = [](const Vec& u) { return Vec::Constant(1, u[0] * u[0] * u[0]); };
  m.state_box = {{-3.0, 3.0}};
  m.c0_claimed = 1.0;
  m.c1_claimed = 1.0;
  m.u_star = Vec::Zero(1);
  return m;
}

// Integrate to t_end with the stability-limited step, clipping the last step.
inline GridField integrate_to(const SystemModel& model, GridField u, const SolverConfig& sc,
                              double t_end,
                              const std::function<void(const GridField&)>& on_step = {}) {
  while (u.time < t_end - 1e-14) {
    double dt = std::min(dt_stable(model, u, sc), t_end - u.time);
    u = step(model, u, sc, dt);
    if (on_step) on_step(u);
  }
  return u;
}

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace vvlab::test

#endif
