// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helmpml/bessel.hpp"
#include "helmpml/oracles.hpp"

using namespace helmpml;
using namespace helmpml::oracles;

namespace {

PmlSetup default_setup(double theta = M_PI / 4.0, double R_tr = 1.5) {
  return PmlSetup(ScalingFunction::smooth_step_profile(1.0, 1.25), theta, 2, R_tr);
}

std::function<Complex(double)> ring_profile(double R_scat, double R1) {
  // C-infinity profile supported in (R_scat, R1)
  return [R_scat, R1](double r) -> Complex {
    return smooth_bump((r - R_scat) / (R1 - R_scat));
  };
}

}  // namespace

TEST_CASE("collocation reproduces sin on a split interval") {
  cheb::BvpCoefficients co;
  co.a2 = [](double) { return Complex(1.0); };
  co.a1 = [](double) { return Complex(0.0); };
  co.a0 = [](double) { return Complex(1.0); };
  co.rhs = [](double) { return Complex(0.0); };
  const auto f = cheb::solve_bvp({0.0, 0.7, M_PI / 2.0}, 24, co,
                                 cheb::BoundaryCondition::dirichlet(0.0),
                                 cheb::BoundaryCondition::dirichlet(1.0));
  for (double r : {0.1, 0.5, 0.7, 1.0, 1.5}) {
    CHECK(std::abs(f.value(r) - std::sin(r)) <= 1e-12);
    CHECK(std::abs(f.deriv(r) - std::cos(r)) <= 1e-10);
  }
}

TEST_CASE("collocation handles Robin conditions") {
  // V'' = V on [0,1], V(0) = 1, V'(1) = V(1)  ->  V = exp(r).
  cheb::BvpCoefficients co;
  co.a2 = [](double) { return Complex(1.0); };
  co.a1 = [](double) { return Complex(0.0); };
  co.a0 = [](double) { return Complex(-1.0); };
  co.rhs = [](double) { return Complex(0.0); };
  const auto f = cheb::solve_bvp({0.0, 1.0}, 32, co,
                                 cheb::BoundaryCondition::dirichlet(1.0),
                                 cheb::BoundaryCondition::robin(1.0, 0.0));
  CHECK(std::abs(f.value(0.5) - std::exp(0.5)) <= 5e-12);
}

TEST_CASE("adaptive doubling reports spectral self-convergence") {
  cheb::BvpCoefficients co;
  const double k = 12.0;
  co.a2 = [](double) { return Complex(1.0); };
  co.a1 = [](double r) { return Complex(1.0 / r); };
  co.a0 = [k](double) { return Complex(k * k); };
  co.rhs = [](double) { return Complex(0.0); };
  // J_0(kr) profile: V(0.05) and V(2) Dirichlet data taken from bessel.
  const auto va = bessel::bessel_pair(0, k * 0.05).J;
  const auto vb = bessel::bessel_pair(0, k * 2.0).J;
  double prev_diff = -1.0;
  int shrinks = 0;
  for (int N : {16, 32, 64, 128}) {
    const auto f = cheb::solve_bvp({0.05, 2.0}, N, co,
                                   cheb::BoundaryCondition::dirichlet(va),
                                   cheb::BoundaryCondition::dirichlet(vb));
    double diff = 0.0;
    for (int i = 1; i < 40; ++i) {
      const double r = 0.05 + (2.0 - 0.05) * i / 40.0;
      diff = std::max(diff, std::abs(f.value(r) - bessel::bessel_pair(0, k * r).J));
    }
    if (prev_diff > 0.0 && diff < prev_diff / 8.0) ++shrinks;
    if (prev_diff > 0.0 && diff < 1e-13) ++shrinks;  // already at the floor
    prev_diff = diff;
  }
  CHECK(shrinks >= 2);
  CHECK(prev_diff <= 1e-12);
}

TEST_CASE("radial pml solve: zero source gives zero") {
  const auto setup = default_setup();
  const auto medium = MediumSpec::homogeneous(0.5);
  const auto v = radial_mode_pml_solve(3, 10.0, setup, medium,
                                       [](double) { return Complex(0.0); });
  for (double r : {0.2, 0.7, 1.2, 1.45})
    CHECK(std::abs(v.value(r)) <= 1e-16);
}

TEST_CASE("radial pml solve rejects non-radial media") {
  const auto setup = default_setup();
  auto med = MediumSpec::general(
      0.5, [](const Point&) { return MatD::identity(2); },
      [](const Point&) { return 1.0; });
  CHECK_THROWS_AS(radial_mode_pml_solve(0, 10.0, setup, med,
                                        [](double) { return Complex(1.0); }),
                  std::invalid_argument);
}

TEST_CASE("exact outgoing mode: Green kernel vs DtN collocation") {
  // A zero-amplitude bump forces the DtN-collocation branch while leaving
  // the medium physically homogeneous; the Hankel-integral branch must
  // agree to oracle accuracy.
  const double k = 9.0;
  const auto hom = MediumSpec::homogeneous(0.5);
  const auto hom_marked = MediumSpec::radial_bump(0.5, 0.0, 0.15, 0.4);
  const auto g = ring_profile(0.5, 1.0);
  for (int n : {0, 1, 4, 9}) {
    const auto ua = exact_outgoing_mode(n, k, hom, g, 1.0, 1.0);
    const auto ub = exact_outgoing_mode(n, k, hom_marked, g, 1.0, 1.0);
    double scale = 0.0;
    for (int i = 0; i <= 50; ++i)
      scale = std::max(scale, std::abs(ua.value(0.02 + 0.97 * i / 50.0)));
    for (int i = 0; i <= 50; ++i) {
      const double r = 0.02 + 0.97 * i / 50.0;
      CHECK(std::abs(ua.value(r) - ub.value(r)) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("pml truncation error: deep absorption reaches the oracle floor") {
  const auto setup = PmlSetup(ScalingFunction::smooth_step_profile(1.0, 1.5),
                              M_PI / 2.0 - 0.15, 2, 3.0);
  const auto medium = MediumSpec::homogeneous(0.5);
  const auto res = pml_truncation_error(20.0, setup, medium,
                                        SourceSpec::ring(2, ring_profile(0.5, 1.0)));
  CHECK(res.ratio <= 1e-10);
}

TEST_CASE("pml truncation error decays with k") {
  // Truncation before the linear-scaling radius (R_tr < R2) keeps the total
  // absorption moderate, so the k-decay is visible above the oracle floor.
  const auto setup = PmlSetup(ScalingFunction::smooth_step_profile(1.0, 2.5),
                              M_PI / 4.0, 2, 1.5);
  const auto medium = MediumSpec::homogeneous(0.5);
  const auto src = SourceSpec::ring(1, ring_profile(0.5, 1.0));
  const auto r5 = pml_truncation_error(5.0, setup, medium, src);
  const auto r10 = pml_truncation_error(10.0, setup, medium, src);
  const auto r20 = pml_truncation_error(20.0, setup, medium, src);
  CHECK(r5.ratio > 1e-9);
  CHECK(r10.ratio > 1e-10);
  CHECK(r10.ratio < r5.ratio);
  CHECK(r20.ratio < r10.ratio);
}

TEST_CASE("pml truncation error is stable under oracle refinement") {
  // Weak absorption keeps the truncation error orders of magnitude above
  // the oracle noise floor, so relative invariance is meaningful.
  const auto setup = PmlSetup(ScalingFunction::smooth_step_profile(1.0, 2.5),
                              M_PI / 12.0, 2, 1.5);
  const auto medium = MediumSpec::homogeneous(0.5);
  const auto src = SourceSpec::ring(2, ring_profile(0.5, 1.0));
  ModeSolveOptions coarse;
  ModeSolveOptions fine;
  fine.N_start = 48;
  fine.green_N = 192;
  const auto a = pml_truncation_error(8.0, setup, medium, src, 1e-13, coarse);
  const auto b = pml_truncation_error(8.0, setup, medium, src, 1e-14, fine);
  CHECK(a.ratio > 1e-7);  // above the oracle floor by a wide margin
  CHECK(std::abs(a.ratio - b.ratio) <= 1e-8 * a.ratio);
  CHECK(b.n_modes >= a.n_modes);
}

TEST_CASE("disk scattering: Dirichlet boundary residual") {
  const double k = 10.0, a = 0.5;
  std::vector<Point> pts;
  for (int i = 0; i < 64; ++i) {
    const double phi = 2.0 * M_PI * i / 64.0;
    pts.push_back({a * std::cos(phi), a * std::sin(phi), 0.0});
  }
  const auto u = disk_scattering_total_field(k, a, 0.3, pts);
  for (const auto& v : u) CHECK(std::abs(v) <= 1e-10);
}

TEST_CASE("disk scattering: vanishing obstacle limit") {
  // In 2D the scattered field of a shrinking sound-soft disk vanishes only
  // logarithmically: |u^S| ~ (pi/2) |H_0(kr)| / ln(2/(ka)).  Check the decay
  // and the logarithmic envelope rather than an algebraic threshold.
  const double k = 10.0;
  std::vector<Point> pts{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {-0.7, 0.7, 0.0}};
  double prev = 1e300;
  for (double a : {1e-4, 1e-6, 1e-8 * 1.01}) {
    const auto u = disk_scattering_total_field(k, a, 0.0, pts);
    double worst = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
      const Complex inc = std::exp(Complex(0.0, k * pts[i].x));
      worst = std::max(worst, std::abs(u[i] - inc));
    }
    const double env = 1.5 * (M_PI / 2.0) * 0.2521 / std::log(2.0 / (k * a));
    CHECK(worst <= env);
    CHECK(worst < prev);
    prev = worst;
  }
}

TEST_CASE("disk scattering rejects interior points") {
  CHECK_THROWS_AS(
      disk_scattering_total_field(10.0, 0.5, 0.0, {{0.1, 0.0, 0.0}}),
      std::domain_error);
}

TEST_CASE("cross-sections: mode sum matches the optical theorem") {
  for (double k : {5.0, 10.0, 25.0}) {
    const auto cs = disk_cross_sections(k, 0.5);
    CHECK(std::abs(cs.mode_sum - cs.forward_amplitude) <=
          1e-8 * std::max(1.0, cs.mode_sum));
  }
}

TEST_CASE("modal expansion tail: doubling the mode budget is invariant") {
  const auto setup = default_setup();
  const auto medium = MediumSpec::homogeneous(0.5);
  const auto me_a =
      ModalExpansion::pml_solution(6.0, setup, medium, SourceSpec::plane_wave());
  const auto me_b = ModalExpansion::pml_solution(6.0, setup, medium,
                                                 SourceSpec::plane_wave(), 1e-15);
  CHECK(me_b.n_modes() >= me_a.n_modes());
  double scale = 0.0, diff = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double x = -1.3 + 2.6 * i / 59.0;
    const double y = 0.4 * std::sin(3.0 * i);
    if (std::hypot(x, y) > 1.45) continue;
    const Complex va = me_a.value(x, y);
    diff = std::max(diff, std::abs(va - me_b.value(x, y)));
    scale = std::max(scale, std::abs(va));
  }
  CHECK(diff <= 1e-12 * scale);
}

TEST_CASE("tabulated modal evaluator matches the direct expansion") {
  const auto setup = default_setup();
  const auto medium = MediumSpec::homogeneous(0.5);
  const auto me =
      ModalExpansion::pml_solution(10.0, setup, medium, SourceSpec::plane_wave(0.4));
  const TabulatedModal tab(me);
  double scale = 1e-300;
  for (int i = 0; i < 40; ++i) {
    const double r = 0.02 + 1.45 * i / 40.0;
    scale = std::max(scale, std::abs(me.value(r, 0.1 * r)));
  }
  for (int i = 0; i < 200; ++i) {
    const double phi = 0.13 * i;
    const double r = 0.01 + 1.47 * (i % 40) / 40.0;
    const double x = r * std::cos(phi), y = r * std::sin(phi);
    Complex v1, dx1, dy1, v2, dx2, dy2;
    me.value_and_gradient(x, y, v1, dx1, dy1);
    tab.value_and_gradient(x, y, v2, dx2, dy2);
    CHECK(std::abs(v1 - v2) <= 2e-8 * scale);
    CHECK(std::abs(dx1 - dx2) <= 2e-7 * scale * me.k());
    CHECK(std::abs(dy1 - dy2) <= 2e-7 * scale * me.k());
  }
}
