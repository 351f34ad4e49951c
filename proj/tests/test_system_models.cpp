#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "test_util.hpp"

using namespace vvlab;

TEST_CASE("constant diagonal pair") {
  SystemModel m;
  m.name = "const-diag";
  m.n = 2;
  m.eval_A = [](const Vec&) {
    Mat A = Mat::Zero(2, 2);
    A(0, 0) = 1;
    A(1, 1) = 2;
    return A;
  };
  m.eval_B = [](const Vec&) {
    Mat B = Mat::Zero(2, 2);
    B(0, 0) = 3;
    B(1, 1) = 4;
    return B;
  };
  m.state_box = {{-1, 1}, {-1, 1}};
  m.c0_claimed = 1.0;
  m.c1_claimed = 3.0;
  m.u_star = Vec::Zero(2);

  HypothesisReport rep = check_hypotheses(m, 5);
  CHECK(rep.min_gap == doctest::Approx(1.0));
  CHECK(rep.min_mu == doctest::Approx(3.0));
  CHECK(rep.max_commutator == 0.0);
  CHECK(rep.pass());
}

TEST_CASE("burgers: scalar gap vacuous, mu floor 1") {
  SystemModel m = builtin_system("burgers");
  HypothesisReport rep = check_hypotheses(m, 101);
  CHECK(std::isinf(rep.min_gap));
  CHECK(rep.min_mu == doctest::Approx(1.0));
  CHECK(rep.pass());
}

TEST_CASE("shared_frame2 against brute-force eigen sampling") {
  SystemModel m = builtin_system("shared_frame2");
  HypothesisReport rep = check_hypotheses(m, 33);
  CHECK(rep.max_commutator <= 1e-12);
  CHECK(rep.min_gap >= 1.6 - 1e-12);

  // independent oracle: random samples, generic eigenvalue routine
  auto gen = test::rng(7);
  std::uniform_real_distribution<double> box(-0.2, 0.2);
  for (int trial = 0; trial < 200; ++trial) {
    Vec u(2);
    u << box(gen), box(gen);
    Mat A = m.eval_A(u);
    Eigen::EigenSolver<Mat> es(A);
    double l0 = es.eigenvalues()[0].real(), l1 = es.eigenvalues()[1].real();
    CHECK(std::abs(es.eigenvalues()[0].imag()) < 1e-12);
    CHECK(std::abs(l1 - l0) >= 1.6 - 1e-12);
  }
}

TEST_CASE("builtin catalogue") {
  SystemModel burgers = builtin_system("burgers");
  CHECK(burgers.n == 1);
  Vec u = Vec::Constant(1, 0.7);
  CHECK(burgers.eval_A(u)(0, 0) == doctest::Approx(0.7));
  CHECK(burgers.eval_B(u)(0, 0) == doctest::Approx(1.0));
  CHECK((*burgers.eval_flux)(u)[0] == doctest::Approx(0.5 * 0.49));

  SystemModel heat = builtin_system("heat");
  CHECK(heat.eval_A(u)(0, 0) == 0.0);
  CHECK(heat.eval_B(u)(0, 0) == 1.0);
  CHECK(!heat.eval_flux);

  SystemModel dec = builtin_system("decoupled2");
  Vec u2(2);
  u2 << 0.1, -0.1;
  CHECK(dec.eval_A(u2)(0, 0) == doctest::Approx(0.1));
  CHECK(dec.eval_A(u2)(1, 1) == doctest::Approx(0.9));
  CHECK(dec.eval_B(u2)(1, 1) == doctest::Approx(2.0));

  CHECK_THROWS_AS(builtin_system("nope"), UnknownSystem);
}

TEST_CASE("all builtins commute on 1e4 random box samples") {
  auto gen = test::rng(11);
  for (const char* name :
       {"burgers", "heat", "decoupled2", "shared_frame2", "shared_frame3"}) {
    SystemModel m = builtin_system(name);
    std::vector<std::uniform_real_distribution<double>> dists;
    for (const auto& iv : m.state_box) dists.emplace_back(iv.lo, iv.hi);
    int samples = 10000 / 5;
    for (int s = 0; s < samples; ++s) {
      Vec u(m.n);
      for (int c = 0; c < m.n; ++c) u[c] = dists[c](gen);
      Mat A = m.eval_A(u), B = m.eval_B(u);
      CHECK((A * B - B * A).norm() <= 1e-10 * (1.0 + A.norm() * B.norm()));
    }
  }
}

TEST_CASE("flux Jacobian matches A under h-refinement") {
  // burgers: quadratic flux, central difference is exact up to roundoff
  SystemModel burgers = builtin_system("burgers");
  const FluxFn& f = *burgers.eval_flux;
  auto mismatch = [&](const SystemModel& m, const FluxFn& flux, const Vec& u, double h) {
    Mat J(m.n, m.n);
    for (int c = 0; c < m.n; ++c) {
      Vec up = u, um = u;
      up[c] += h;
      um[c] -= h;
      J.col(c) = (flux(up) - flux(um)) / (2 * h);
    }
    return (J - m.eval_A(u)).norm();
  };
  Vec u = Vec::Constant(1, 0.37);
  CHECK(mismatch(burgers, f, u, 1e-3) <= 1e-11);
  CHECK(mismatch(burgers, f, u, 5e-4) <= 1e-11);

  // cubic flux: genuine O(h^2) refinement
  SystemModel cubic = test::cubic_system();
  double e1 = mismatch(cubic, *cubic.eval_flux, u, 1e-2);
  double e2 = mismatch(cubic, *cubic.eval_flux, u, 5e-3);
  double order = std::log2(e1 / e2);
  CHECK(order >= 1.9);
}

TEST_CASE("check_hypotheses is deterministic") {
  SystemModel m = builtin_system("shared_frame3");
  HypothesisReport a = check_hypotheses(m, 7);
  HypothesisReport b = check_hypotheses(m, 7);
  CHECK(a.min_gap == b.min_gap);
  CHECK(a.min_mu == b.min_mu);
  CHECK(a.max_commutator == b.max_commutator);
}

TEST_CASE("non-commuting pair fails the commutation check") {
  SystemModel m;
  m.name = "bad";
  m.n = 2;
  m.eval_A = [](const Vec&) {
    Mat A = Mat::Zero(2, 2);
    A(0, 0) = 0;
    A(1, 1) = 1;
    A(0, 1) = 0.5;
    return A;
  };
  m.eval_B = [](const Vec&) {
    Mat B = Mat::Zero(2, 2);
    B(0, 0) = 1;
    B(1, 1) = 2;
    return B;
  };
  m.state_box = {{-1, 1}, {-1, 1}};
  m.c0_claimed = 0.5;
  m.c1_claimed = 1.0;
  m.u_star = Vec::Zero(2);
  HypothesisReport rep = check_hypotheses(m, 3);
  CHECK(!rep.commutation_ok);
  CHECK(!rep.pass());
}

TEST_CASE("custom shared-frame systems from polynomial coefficients") {
  Mat R(2, 2);
  R << 1, 1, 0, 1;
  SystemModel m = make_shared_frame_system("custom", R, {{0.0, 1.0}, {2.0, 1.0}},
                                           {{1.0, 0.0, 1.0}, {2.0}},
                                           {{-0.2, 0.2}, {-0.2, 0.2}}, 1.6, 1.0, Vec::Zero(2));
  SystemModel ref = builtin_system("shared_frame2");
  Vec u(2);
  u << 0.13, -0.05;
  CHECK((m.eval_A(u) - ref.eval_A(u)).norm() == doctest::Approx(0.0));
  CHECK((m.eval_B(u) - ref.eval_B(u)).norm() == doctest::Approx(0.0));
}
