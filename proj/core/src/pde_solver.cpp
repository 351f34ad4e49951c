#include "vvlab/pde_solver.hpp"

#include "vvlab/spectral.hpp"

#include <cmath>

namespace vvlab {

Vec GridField::at(int j) const {
  if (j >= 0 && j < M) return values.col(j);
  if (boundary == Boundary::Periodic) {
    int k = ((j % M) + M) % M;
    return values.col(k);
  }
  return values.col(j < 0 ? 0 : M - 1);
}

namespace {

// Semidiscrete RHS; shared by step() and compute_ut(). Midpoint viscosity
// matrices sit on interfaces, so evaluate each of the M+1 once.
Mat rhs(const SystemModel& model, const GridField& f, double epsilon, bool conservative) {
  const int n = f.n(), M = f.M;
  const double h = f.h;
  Mat out(n, M);

  std::vector<Mat> midB(M + 1);
  for (int j = 0; j <= M; ++j) midB[j] = model.eval_B(0.5 * (f.at(j - 1) + f.at(j)));

  const bool use_flux = conservative && model.eval_flux.has_value();
  Mat F;
  if (use_flux) {
    const FluxFn& flux = *model.eval_flux;
    F.resize(n, M);
    for (int j = 0; j < M; ++j) F.col(j) = flux(f.values.col(j));
  }
  auto flux_at = [&](int j) -> Vec {
    if (j >= 0 && j < M) return F.col(j);
    if (f.boundary == Boundary::Periodic) return F.col(((j % M) + M) % M);
    return F.col(j < 0 ? 0 : M - 1);
  };

  for (int j = 0; j < M; ++j) {
    Vec um = f.at(j - 1), u = f.values.col(j), up = f.at(j + 1);
    Vec adv;
    if (use_flux) {
      adv = (flux_at(j + 1) - flux_at(j - 1)) / (2.0 * h);
    } else {
      adv = model.eval_A(u) * ((up - um) / (2.0 * h));
    }
    Vec dflux = (midB[j + 1] * (up - u) - midB[j] * (u - um)) / (h * h);
    out.col(j) = epsilon * dflux - adv;
  }
  return out;
}

void validate(const SystemModel& model, const GridField& f) {
  for (int j = 0; j < f.M; ++j) {
    for (int c = 0; c < f.n(); ++c)
      if (!std::isfinite(f.values(c, j)))
        throw NonFiniteState("cell " + std::to_string(j));
    if (!model.in_box(f.values.col(j), 0.1))
      throw StateLeftBox("cell " + std::to_string(j) + " at t=" + std::to_string(f.time));
  }
}

}  // namespace

double dt_stable(const SystemModel& model, const GridField& field, const SolverConfig& config) {
  double max_lambda = 0.0, max_mu = 0.0;
  for (int j = 0; j < field.M; ++j) {
    SpectralData sd = decompose(model, field.values.col(j));
    max_lambda = std::max(max_lambda, sd.lambdas.cwiseAbs().maxCoeff());
    max_mu = std::max(max_mu, sd.mus.maxCoeff());
  }
  double dt_par = config.cfl_parabolic * field.h * field.h / (config.epsilon * max_mu);
  if (max_lambda == 0.0) return dt_par;
  double dt_adv = config.cfl_advective * field.h / max_lambda;
  return std::min(dt_adv, dt_par);
}

GridField step(const SystemModel& model, const GridField& field, const SolverConfig& config,
               double dt) {
  GridField out = field;
  Mat k1 = rhs(model, field, config.epsilon, config.conservative);
  GridField stage = field;
  stage.values = field.values + dt * k1;
  stage.time = field.time + dt;
  validate(model, stage);
  Mat k2 = rhs(model, stage, config.epsilon, config.conservative);
  out.values = field.values + 0.5 * dt * (k1 + k2);
  out.time = field.time + dt;
  validate(model, out);
  return out;
}

GridField compute_ut(const SystemModel& model, const GridField& field, double epsilon,
                     bool conservative) {
  GridField out = field;
  out.values = rhs(model, field, epsilon, conservative);
  return out;
}

GridField derivative(const GridField& field, int order) {
  const int n = field.n(), M = field.M;
  const double h = field.h;
  GridField out = field;
  for (int j = 0; j < M; ++j) {
    switch (order) {
      case 1:
        out.values.col(j) = (field.at(j + 1) - field.at(j - 1)) / (2.0 * h);
        break;
      case 2:
        out.values.col(j) =
            (field.at(j + 1) - 2.0 * field.values.col(j) + field.at(j - 1)) / (h * h);
        break;
      case 3:
        out.values.col(j) = (-field.at(j - 2) + 2.0 * field.at(j - 1) - 2.0 * field.at(j + 1) +
                             field.at(j + 2)) /
                            (2.0 * h * h * h);
        break;
      default:
        throw Error("derivative: order must be 1, 2 or 3");
    }
  }
  (void)n;
  return out;
}

L1Norm l1_norm(const GridField& field) {
  L1Norm norm;
  norm.per_component.assign(field.n(), 0.0);
  for (int c = 0; c < field.n(); ++c)
    norm.per_component[c] = field.h * field.values.row(c).cwiseAbs().sum();
  for (double v : norm.per_component) norm.total += v;
  return norm;
}

double linf_distance(const GridField& a, const GridField& b) {
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

double l1_distance(const GridField& a, const GridField& b) {
  return a.h * (a.values - b.values).cwiseAbs().sum();
}

}  // namespace vvlab
