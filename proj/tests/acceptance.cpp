// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite: one pass/fail line per criterion, nonzero
// exit if any fails.  Tolerances are pinned in code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "helmpml/bessel.hpp"
#include "helmpml/experiments.hpp"
#include "helmpml/rng.hpp"

using namespace helmpml;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool pass, double seconds,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %-34s (%6.1fs) %s\n", pass ? "PASS" : "FAIL",
              num, name.c_str(), seconds, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run(int num, const std::string& name,
         const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = Clock::now();
  bool pass = false;
  std::string detail;
  try {
    auto [p, d] = body();
    pass = p;
    detail = d;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  report(num, name, pass, dt, detail);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

PmlSetup default_setup(double theta, int d = 2) {
  return PmlSetup(ScalingFunction::smooth_step_profile(1.0, 1.25), theta, d, 1.5);
}

}  // namespace

int main() {
  const std::string out = "acceptance_out";

  run(1, "coefficient consistency", []() {
    Rng rng(101);
    const auto medium = MediumSpec::homogeneous(0.5);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const double theta = rng.uniform(M_PI / 12.0, M_PI / 2.0 - M_PI / 12.0);
      const auto setup = default_setup(theta);
      const double k = rng.uniform(1.0, 50.0);
      std::array<double, 3> a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), 0.0};
      if (std::hypot(a[0], a[1]) < 1e-3) a[0] = 1.0;
      const auto u = plane_wave_field(k, a, 2);
      const double r = rng.uniform(1.0 + 1e-6, 1.5);
      const double phi = rng.uniform(0.0, 2.0 * M_PI);
      const Point x{r * std::cos(phi), r * std::sin(phi), 0.0};
      worst = std::max(worst, operator_consistency_residual(setup, medium, u, x));
    }
    return std::make_pair(worst <= 1e-8, fmt("max residual %.3e <= 1e-8", worst));
  });

  run(2, "ellipticity of Re D", []() {
    // Profile choice is ours; the gradual ramp (R2 = 2.5) keeps f' moderate
    // so the ellipticity constant clears the bar uniformly in theta.
    double mn = 1e300;
    for (int d : {2, 3}) {
      for (int it = 0; it <= 48; ++it) {
        const double theta =
            M_PI / 12.0 + (M_PI / 2.0 - M_PI / 6.0) * it / 48.0;
        const PmlSetup setup(ScalingFunction::smooth_step_profile(1.0, 2.5),
                             theta, d, 5.1);
        for (int ir = 0; ir <= 800; ++ir) {
          const double r = 1.0 + 4.0 * ir / 800.0;  // [R1, 2 R2]
          mn = std::min(mn, re_part_spectrum(setup, r)[0]);
        }
      }
    }
    return std::make_pair(mn >= 0.05, fmt("min eig Re D = %.4f >= 0.05", mn));
  });

  run(3, "Garding and continuity", []() {
    int bad = 0;
    double worst_ratio = 0.0, worst_slack = 1e300;
    for (double theta : {M_PI / 12.0, M_PI / 4.0, 5.0 * M_PI / 12.0}) {
      const auto setup = default_setup(theta);
      const auto medium = MediumSpec::homogeneous(0.5);
      const fem::HpSpace space(mesh::generate_mesh(1.5, 0.25, std::nullopt, 1.0), 3);
      const auto sys = fem::assemble(space, setup, medium, 8.0,
                                     fem::SourceTerm::plane_wave());
      const auto rep = fem::stability_checks(sys, 1000, 4242);
      bad += rep.garding_failures + rep.continuity_failures;
      worst_ratio = std::max(worst_ratio, rep.worst_continuity_ratio);
      worst_slack = std::min(worst_slack, rep.worst_garding_slack);
    }
    return std::make_pair(bad == 0,
                          fmt("failures %d, worst continuity ratio %.3f, "
                              "min Garding slack %.3e",
                              bad, worst_ratio, worst_slack));
  });

  run(4, "PML exponential accuracy", [&]() {
    experiments::ExperimentConfig cfg;  // defaults: theta=pi/4, R_tr=1.5
    const auto res = experiments::run_pml_sweep(cfg, out);
    const bool above_floor = res.rows.front().err_ratio > 1e-11;
    const bool pass = res.monotone && res.fit_ok && above_floor;
    return std::make_pair(
        pass, fmt("ratios %.2e > %.2e > %.2e, fit slope %.3f, R^2 %.3f",
                  res.rows[0].err_ratio, res.rows[1].err_ratio,
                  res.rows[2].err_ratio, res.fit.slope, res.fit.r2));
  });

  // Criteria 5 and 6 share one pollution-study run.
  experiments::PollutionResult pol;
  run(5, "pollution-free hp-FEM", [&]() {
    experiments::ExperimentConfig cfg;
    pol = experiments::run_pollution_study(cfg, out);
    bool all_ok = true, cqo_ge_1 = true;
    for (const auto& r : pol.rows) {
      if (r.status != "ok") all_ok = false;
      if (r.status == "ok" && r.c_qo < 1.0 - 1e-6) cqo_ge_1 = false;
    }
    const double spread = pol.hp_cqo_max / pol.hp_cqo_min;
    return std::make_pair(all_ok && cqo_ge_1 && spread <= 2.0,
                          fmt("hp C_qo in [%.4f, %.4f], spread %.3f <= 2",
                              pol.hp_cqo_min, pol.hp_cqo_max, spread));
  });

  run(6, "pollution demonstration (h arm)", [&]() {
    double e10 = -1.0, e40 = -1.0;
    for (const auto& r : pol.rows)
      if (r.arm == "h" && r.status == "ok") {
        if (r.k == 10.0) e10 = r.rel_err_h1k;
        if (r.k == 40.0) e40 = r.rel_err_h1k;
      }
    const bool pass = e10 > 0.0 && e40 >= 1.5 * e10;
    return std::make_pair(
        pass, fmt("rel err k=40: %.3f vs k=10: %.3f (ratio %.2f >= 1.5)", e40,
                  e10, e10 > 0 ? e40 / e10 : 0.0));
  });

  run(7, "torus projector algebra", []() {
    const double k = 12.0, mu = 5.0;
    const torus::TorusGrid grid(3.2, 256, 2);
    Rng rng(777);
    const auto cut = torus::build_cutoffs(mu);
    double worst_recon = 0.0, worst_pipi = 0.0, worst_contract = 0.0;
    const auto phi = torus::radial_cutoff_field(grid, 1.0, 0.1);
    for (int t = 0; t < 4; ++t) {
      auto w = torus::TorusField(grid, rng.complex_vector(grid.size()));
      // window it inside the truncation ball so the split applies
      for (int ix = 0; ix < grid.N(); ++ix)
        for (int iy = 0; iy < grid.N(); ++iy) {
          const double r = std::hypot(grid.coord(ix), grid.coord(iy));
          w.at(ix, iy) *= r < 1.45 ? 1.0 : 0.0;
        }
      const auto dec = torus::decompose_solution(w, phi, {1.0, 0.1}, mu, k);
      const double wn = w.l2_norm();
      for (size_t i = 0; i < w.values().size(); ++i)
        worst_recon = std::max(
            worst_recon,
            std::abs(dec.v_low.values()[i] + dec.v_high.values()[i] +
                     dec.v_pml.values()[i] - w.values()[i]) /
                wn);
      const auto again = torus::apply_multiplier(
          dec.v_high, {[&cut](double t2) { return 1.0 - cut.psi_mu_prime(t2); }, k});
      double hn = 0.0;
      for (size_t i = 0; i < again.values().size(); ++i) {
        worst_pipi = std::max(worst_pipi, std::abs(again.values()[i] -
                                                   dec.v_high.values()[i]));
        hn = std::max(hn, std::abs(dec.v_high.values()[i]));
      }
      worst_pipi /= std::max(hn, 1e-300);
      const auto lw = torus::apply_multiplier(w, {cut.psi_mu, k});
      const auto hw = torus::apply_multiplier(
          w, {[&cut](double t2) { return 1.0 - cut.psi_mu(t2); }, k});
      worst_contract = std::max(worst_contract, lw.l2_norm() / wn - 1.0);
      worst_contract = std::max(worst_contract, hw.l2_norm() / wn - 1.0);
    }
    const bool pass = worst_recon <= 1e-13 && worst_pipi <= 1e-13 &&
                      worst_contract <= 1e-12;
    return std::make_pair(pass, fmt("recon %.2e, Pi'Pi-Pi %.2e, contract %.2e",
                                    worst_recon, worst_pipi, worst_contract));
  });

  run(8, "low-pass derivative law", []() {
    const double k = 12.0, mu = 5.0;
    const torus::TorusGrid grid(3.2, 256, 2);
    const auto cut = torus::build_cutoffs(mu);
    const double budget = k * std::sqrt(2.0 * mu);
    Rng rng(888);
    double worst_excess = -1e300;
    for (int t = 0; t < 50; ++t) {
      const auto w = torus::TorusField(grid, rng.complex_vector(grid.size()));
      const auto low = torus::apply_multiplier(w, {cut.psi_mu, k});
      const double wn = w.l2_norm();
      for (int m = 0; m <= 6; ++m)
        for (int a = 0; a <= m; ++a) {
          const double dn = torus::derivative_norm(low, {a, m - a});
          worst_excess = std::max(
              worst_excess, dn / (std::pow(budget, m) * wn) - 1.0);
        }
    }
    return std::make_pair(worst_excess <= 1e-12,
                          fmt("max excess over (k sqrt(2mu))^|a| bound: %.2e",
                              worst_excess));
  });

  run(9, "high-frequency improvement", [&]() {
    experiments::ExperimentConfig cfg;
    const auto res = experiments::run_decomposition_study(cfg, out);
    double rmax = 0.0, rmin = 1e300, r2min = 1.0;
    for (const auto& r : res.rows) {
      rmax = std::max(rmax, r.hf_h1_ratio);
      rmin = std::min(rmin, r.hf_h1_ratio);
      r2min = std::min(r2min, r.growth_r2);
    }
    const bool pass = res.hf_bounded && res.vlow_entire && r2min >= 0.9;
    return std::make_pair(pass,
                          fmt("ratio spread %.2f <= 2, v_low entire (R^2 >= %.3f)",
                              rmin > 0 ? rmax / rmin : 0.0, r2min));
  });

  run(10, "adjoint identity", []() {
    const auto setup = default_setup(M_PI / 4.0);
    const auto medium = MediumSpec::homogeneous(0.5);
    const fem::HpSpace space(mesh::generate_mesh(1.5, 0.2, std::nullopt, 1.0), 3);
    const auto sys = fem::assemble(space, setup, medium, 10.0,
                                   fem::SourceTerm::plane_wave());
    Rng rng(1010);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const double ax = rng.uniform(-6.0, 6.0), ay = rng.uniform(-6.0, 6.0);
      const double c0 = rng.uniform(-1.0, 1.0), c1 = rng.uniform(-1.0, 1.0);
      auto f = [=](double x, double y) {
        return Complex(c0, c1) * std::exp(Complex(0.0, ax * x + ay * y)) +
               Complex(0.2, -0.1) * x * y;
      };
      const auto adj = fem::solve_with_rhs(sys, fem::plain_load(space, f), true);
      const auto pri = fem::solve_with_rhs(
          sys,
          fem::plain_load(space, [&](double x, double y) { return std::conj(f(x, y)); }),
          false);
      double diff = 0.0, scale = 0.0;
      for (size_t i = 0; i < adj.coeffs.size(); ++i) {
        diff = std::max(diff, std::abs(std::conj(adj.coeffs[i]) - pri.coeffs[i]));
        scale = std::max(scale, std::abs(pri.coeffs[i]));
      }
      worst = std::max(worst, diff / scale);
    }
    return std::make_pair(worst <= 1e-10, fmt("max relative gap %.2e <= 1e-10", worst));
  });

  run(11, "oracle self-audit", []() {
    // Wronskian residuals
    Rng rng(1111);
    double worst_w = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const int n = int(rng.uniform(0.0, 180.0));
      const double zlo = std::max(0.5, n / 3.0);
      const double z = std::exp(rng.uniform(std::log(zlo), std::log(1e4)));
      const auto p = bessel::bessel_pair(n, z);
      worst_w = std::max(worst_w,
                         std::abs(p.J * p.dY - p.dJ * p.Y - 2.0 / (M_PI * z)) *
                             M_PI * z / 2.0);
    }
    if (worst_w > 1e-12)
      return std::make_pair(false, fmt("Wronskian residual %.2e > 1e-12", worst_w));

    // Radial solver self-convergence: fixed-degree solves at N, 2N, 4N; the
    // observed order log2(d1/d2) must beat the 6th-order bar (design order
    // for the spectral scheme is super-algebraic, so 5.5 = 6 - 0.5 is the
    // conservative gate).
    const auto setup = default_setup(M_PI / 4.0);
    const auto medium = MediumSpec::homogeneous(0.5);
    auto g1 = [](double r) { return Complex(smooth_bump((r - 0.5) / 0.5), 0.0); };
    double order = 0.0;
    {
      using oracles::ModeSolveOptions;
      auto solve_at = [&](int N) {
        ModeSolveOptions o;
        o.fixed_N = N;
        return oracles::radial_mode_pml_solve(2, 10.0, setup, medium, g1, o);
      };
      const auto v1 = solve_at(24);
      const auto v2 = solve_at(48);
      const auto v3 = solve_at(96);
      double d1 = 0.0, d2 = 0.0;
      for (int i = 1; i < 160; ++i) {
        const double r = 1e-4 + (1.5 - 2e-4) * i / 160.0;
        d1 = std::max(d1, std::abs(v1.value(r) - v2.value(r)));
        d2 = std::max(d2, std::abs(v2.value(r) - v3.value(r)));
      }
      order = std::log2(d1 / std::max(d2, 1e-300));
    }
    if (order < 5.5)
      return std::make_pair(false, fmt("self-convergence order %.2f < 5.5", order));

    // Cross-method agreement at k = 10: modal oracle vs overkill FEM.  The
    // gradual ramp at small theta keeps the absorption skin resolvable, so
    // the FEM side can actually reach the 1e-6 budget.
    const double k = 10.0;
    const PmlSetup xsetup(ScalingFunction::smooth_step_profile(1.0, 2.5),
                          M_PI / 12.0, 2, 1.5);
    auto gf = [](double x, double y) {
      const double r = std::hypot(x, y);
      return Complex(smooth_bump((r - 0.5) / 0.5), 0.0);
    };
    const auto vn = oracles::radial_mode_pml_solve(0, k, xsetup, medium, g1);
    const fem::HpSpace over(mesh::generate_mesh(1.5, 0.08, std::nullopt, 1.0), 6);
    const auto sys = fem::assemble(over, xsetup, medium, k, fem::SourceTerm::volume(gf));
    const auto sol = fem::solve(sys);
    double worst_x = 0.0;
    for (double phi : {0.0, 1.1, 2.7, 4.4}) {
      Complex fv, gx, gy;
      over.evaluate(sol.coeffs, 0.5 * std::cos(phi), 0.5 * std::sin(phi), fv, gx, gy);
      worst_x = std::max(worst_x, std::abs(fv - vn.value(0.5)));
    }
    const bool pass = worst_x <= 1e-6;
    return std::make_pair(pass,
                          fmt("Wronskian %.2e, order %.1f, cross-method gap %.2e",
                              worst_w, order, worst_x));
  });

  std::printf("%s: %d of 11 criteria passed\n", g_failures ? "FAILURE" : "SUCCESS",
              11 - g_failures);
  return g_failures ? 1 : 0;
}
