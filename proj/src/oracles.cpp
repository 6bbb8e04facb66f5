// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "helmpml/bessel.hpp"
#include "helmpml/smoothstep.hpp"

namespace helmpml::oracles {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// 12-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGL = 12;
constexpr double kGLx[kGL] = {
    -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
    0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
    0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
constexpr double kGLw[kGL] = {
    0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
    0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

// Panel quadrature grid on [a, b] resolving oscillation scale k.
struct RadialQuad {
  std::vector<double> r;
  std::vector<double> w;
};

RadialQuad radial_quad(double a, double b, double k, int min_panels = 12) {
  const int panels = std::max(min_panels, int(std::ceil(k * (b - a) / 2.0)) + 2);
  RadialQuad q;
  q.r.reserve(size_t(panels) * kGL);
  q.w.reserve(size_t(panels) * kGL);
  for (int p = 0; p < panels; ++p) {
    const double pa = a + (b - a) * p / panels;
    const double pb = a + (b - a) * (p + 1) / panels;
    for (int g = 0; g < kGL; ++g) {
      q.r.push_back(0.5 * (pa + pb) + 0.5 * (pb - pa) * kGLx[g]);
      q.w.push_back(0.5 * (pb - pa) * kGLw[g]);
    }
  }
  return q;
}

std::vector<double> assemble_breakpoints(double inner, double outer,
                                         std::vector<double> candidates) {
  std::vector<double> out{inner};
  std::sort(candidates.begin(), candidates.end());
  for (double r : candidates)
    if (r > inner + 1e-9 && r < outer - 1e-9 && r > out.back() + 1e-9)
      out.push_back(r);
  out.push_back(outer);
  return out;
}

cheb::BoundaryCondition inner_bc(int n, double k, const MediumSpec& medium,
                                 const ModeSolveOptions& opts, double& inner) {
  if (opts.obstacle_radius) {
    inner = *opts.obstacle_radius;
    return cheb::BoundaryCondition::dirichlet(0.0);
  }
  inner = 1e-3 / k;
  // Regularity through the J_|n| asymptotic relation at r_min; exact when
  // the medium is homogeneous inside r_min.
  const double k0 = k / medium.c_radial(0.0);
  const double rho = k0 * bessel::j_log_derivative(std::abs(n), k0 * inner);
  return cheb::BoundaryCondition::robin(rho, 0.0);
}


}  // namespace

Complex plane_wave_modal_load(int n, double k, double R_scat, double R1,
                              double r) {
  // chi = 1 on r <= R_scat, 0 on r >= R1.  The scattered-field reformulation
  // of exp(ik x.a) produces 2 grad(chi).grad(uI) + uI lap(chi); our solver
  // convention (P_theta - k^2) v = g flips its sign.
  if (r <= R_scat || r >= R1) return 0.0;
  const SmoothStep st = smooth_step((r - R_scat) / (R1 - R_scat));
  const double w = R1 - R_scat;
  const double chi_p = -st.ds / w;
  const double chi_pp = -st.dds / (w * w);
  const auto arr = bessel::jy_arrays(std::abs(n) + 1, k * r);
  const size_t m = size_t(std::abs(n));
  const double Jn = arr.J[m];
  const double dJn = arr.dJ[m];
  return -ipow(n) * ((chi_pp + chi_p / r) * Jn + 2.0 * k * chi_p * dJn);
}

PiecewiseChebFunction radial_mode_pml_solve(int n, double k, const PmlSetup& setup,
                                            const MediumSpec& medium,
                                            const std::function<Complex(double)>& g_n,
                                            const ModeSolveOptions& opts) {
  if (!medium.radial())
    throw std::invalid_argument("radial_mode_pml_solve: medium not radial");
  if (!medium.identity_A())
    throw std::invalid_argument("radial_mode_pml_solve: A_scat must be I");
  double inner = 0.0;
  const auto left = inner_bc(n, k, medium, opts, inner);
  std::vector<double> cand{medium.R_scat(), setup.R1(), setup.R2()};
  for (double r : medium.radial_breakpoints()) cand.push_back(r);
  const auto bp = assemble_breakpoints(inner, setup.R_tr(), std::move(cand));

  const double nn = double(n) * n;
  cheb::BvpCoefficients co;
  co.a2 = [&setup, &medium](double r) {
    const auto [alpha, beta] = alpha_beta(setup, r);
    (void)beta;
    const double c = medium.c_radial(r);
    return c * c / (alpha * alpha);
  };
  co.a1 = [&setup, &medium](double r) {
    const auto [alpha, beta] = alpha_beta(setup, r);
    const auto ft = setup.eval_theta(r);
    const Complex dalpha = kI * ft.ddf;
    const double c = medium.c_radial(r);
    return c * c * (1.0 - beta * r * dalpha / (alpha * alpha)) / (alpha * beta * r);
  };
  co.a0 = [&setup, &medium, nn, k](double r) {
    const auto [alpha, beta] = alpha_beta(setup, r);
    (void)alpha;
    const double c = medium.c_radial(r);
    return -c * c * nn / (beta * beta * r * r) + k * k;
  };
  co.rhs = [&g_n](double r) { return -g_n(r); };

  if (opts.fixed_N > 0)
    return cheb::solve_bvp(bp, opts.fixed_N, co, left,
                           cheb::BoundaryCondition::dirichlet(0.0));
  const auto res = cheb::solve_bvp_adaptive(
      bp, co, left, cheb::BoundaryCondition::dirichlet(0.0), opts.rel_tol,
      opts.N_start, opts.N_max);
  return res.solution;
}

PiecewiseChebFunction exact_outgoing_mode(int n, double k, const MediumSpec& medium,
                                          const std::function<Complex(double)>& g_n,
                                          double R1, double r_max,
                                          const ModeSolveOptions& opts) {
  const double R_scat = medium.R_scat();
  const int na = std::abs(n);
  double inner = 0.0;
  const auto left = inner_bc(n, k, medium, opts, inner);

  const bool homogeneous =
      medium.radial() && medium.radial_breakpoints().empty() && medium.identity_A();
  if (!homogeneous) {
    // DtN closure at R1 (coefficients are identity beyond R_scat < R1).
    std::vector<double> cand{R_scat};
    for (double r : medium.radial_breakpoints()) cand.push_back(r);
    const auto bp = assemble_breakpoints(inner, R1, std::move(cand));
    const auto dtn = bessel::dtn_coefficient(na, k, R1);
    const double nn = double(n) * n;
    cheb::BvpCoefficients co;
    co.a2 = [&medium](double r) {
      const double c = medium.c_radial(r);
      return Complex(c * c, 0.0);
    };
    co.a1 = [&medium](double r) {
      const double c = medium.c_radial(r);
      return Complex(c * c / r, 0.0);
    };
    co.a0 = [&medium, nn, k](double r) {
      const double c = medium.c_radial(r);
      return Complex(-c * c * nn / (r * r) + k * k, 0.0);
    };
    co.rhs = [&g_n](double r) { return -g_n(r); };
    auto res = cheb::solve_bvp_adaptive(bp, co, left,
                                        cheb::BoundaryCondition::robin(dtn, 0.0),
                                        opts.rel_tol, opts.N_start, opts.N_max);
    if (r_max <= R1 + 1e-12) return res.solution;
    // Extend outward with the outgoing Hankel multiple.
    auto domains = res.solution.domains();
    const Complex vR1 = res.solution.value(R1);
    const auto pR1 = bessel::bessel_pair(na, k * R1);
    const Complex scale = vR1 / pR1.H();
    PiecewiseChebFunction::Domain ext;
    ext.a = R1;
    ext.b = r_max;
    ext.nodes = cheb::cgl_nodes(R1, r_max, 96);
    for (double r : ext.nodes) {
      const auto p = bessel::bessel_pair(na, k * r);
      ext.values.push_back(scale * p.H());
      ext.derivs.push_back(scale * k * p.dH());
    }
    domains.push_back(std::move(ext));
    return PiecewiseChebFunction(std::move(domains));
  }

  // Homogeneous medium: Hankel Green-function integrals.  With the regular
  // branch w1 = J_n - rho_a H_n (rho_a = J_n(ka)/H_n(ka) for a sound-soft
  // disk, 0 without an obstacle),
  //   u_n(r) = (i pi / 2) [ H_n(kr) I_w(r) + w1(kr) I_H(r) ],
  //   I_w(r) = int_{s < r} w1(ks) g_n(s) s ds,  I_H the outward complement.
  const int Ncgl = opts.green_N > 0 ? opts.green_N : 128;
  Complex rho_a = 0.0;
  if (opts.obstacle_radius) {
    const auto pa = bessel::bessel_pair(na, k * *opts.obstacle_radius);
    rho_a = pa.J / pa.H();
  }
  std::vector<double> all_bp{inner, R_scat, R1};
  if (r_max > R1 + 1e-12) all_bp.push_back(r_max);

  // Panel quadrature whose panel boundaries are the CGL nodes on the
  // source support, so cumulative integrals are exact at evaluation nodes.
  const auto src_nodes = cheb::cgl_nodes(R_scat, R1, Ncgl);

  struct QP {
    double s, w;
    double Jn;
    Complex Hn;
    Complex w1;
  };
  std::vector<QP> qps;
  for (int p = 0; p < Ncgl; ++p) {
    const double pa = src_nodes[size_t(p)];
    const double pb = src_nodes[size_t(p) + 1];
    for (int g = 0; g < kGL; ++g) {
      QP qp;
      qp.s = 0.5 * (pa + pb) + 0.5 * (pb - pa) * kGLx[g];
      qp.w = 0.5 * (pb - pa) * kGLw[g];
      const auto arr = bessel::jy_arrays(na, k * qp.s);
      if (na >= arr.valid_orders)
        throw std::range_error("exact_outgoing_mode: Hankel overflow on source");
      qp.Hn = Complex(arr.J[size_t(na)], arr.Y[size_t(na)]);
      qp.Jn = arr.J[size_t(na)];
      qp.w1 = qp.Jn - rho_a * qp.Hn;
      qps.push_back(qp);
    }
  }
  // Cumulative integrals at each source CGL node.
  std::vector<Complex> cumJ(static_cast<size_t>(Ncgl) + 1, 0.0), cumH(size_t(Ncgl) + 1, 0.0);
  for (int p = 0; p < Ncgl; ++p) {
    Complex sJ = 0.0, sH = 0.0;
    for (int g = 0; g < kGL; ++g) {
      const auto& qp = qps[size_t(p * kGL + g)];
      const Complex gs = g_n(qp.s) * qp.s * qp.w;
      sJ += qp.w1 * gs;
      sH += qp.Hn * gs;
    }
    cumJ[size_t(p) + 1] = cumJ[size_t(p)] + sJ;
    cumH[size_t(p) + 1] = cumH[size_t(p)] + sH;
  }
  const Complex totJ = cumJ[size_t(Ncgl)];
  const Complex totH = cumH[size_t(Ncgl)];

  auto eval_green = [&](double r, Complex& u, Complex& du) {
    Complex IJ, IH;
    if (r <= R_scat) {
      IJ = 0.0;
      IH = totH;
    } else if (r >= R1) {
      IJ = totJ;
      IH = 0.0;
    } else {
      // r is a source CGL node by construction
      const auto it = std::lower_bound(src_nodes.begin(), src_nodes.end(),
                                       r - 1e-13);
      const size_t idx = size_t(it - src_nodes.begin());
      IJ = cumJ[idx];
      IH = totH - cumH[idx];
    }
    const auto arr = bessel::jy_arrays(na, k * r);
    const double Jn = arr.J[size_t(na)];
    const double dJn = arr.dJ[size_t(na)];
    if (na >= arr.valid_orders) {
      // Deep in the evanescent region H_n overflows, but there I_w = 0 and
      // only the regular branch contributes (rho_a is negligible too).
      if (std::abs(IJ) != 0.0)
        throw std::range_error("exact_outgoing_mode: Hankel overflow");
      u = 0.5 * kI * M_PI * Jn * IH;
      du = 0.5 * kI * M_PI * k * dJn * IH;
      return;
    }
    const Complex Hn(arr.J[size_t(na)], arr.Y[size_t(na)]);
    const Complex dHn = k * Complex(arr.dJ[size_t(na)], arr.dY[size_t(na)]);
    const Complex w1 = Jn - rho_a * Hn;
    const Complex dw1 = k * (dJn - rho_a * Complex(arr.dJ[size_t(na)], arr.dY[size_t(na)]));
    u = 0.5 * kI * M_PI * (Hn * IJ + w1 * IH);
    du = 0.5 * kI * M_PI * (dHn * IJ + dw1 * IH);
  };

  std::vector<PiecewiseChebFunction::Domain> domains;
  for (size_t d = 0; d + 1 < all_bp.size(); ++d) {
    PiecewiseChebFunction::Domain dom;
    dom.a = all_bp[d];
    dom.b = all_bp[d + 1];
    const bool is_src = std::abs(dom.a - R_scat) < 1e-14;
    dom.nodes = is_src ? src_nodes : cheb::cgl_nodes(dom.a, dom.b, Ncgl);
    for (double r : dom.nodes) {
      Complex u, du;
      eval_green(std::max(r, 1e-9 / k), u, du);
      dom.values.push_back(u);
      dom.derivs.push_back(du);
    }
    domains.push_back(std::move(dom));
  }
  return PiecewiseChebFunction(std::move(domains));
}

TruncationError pml_truncation_error(double k, const PmlSetup& setup,
                                     const MediumSpec& medium,
                                     const SourceSpec& source, double tail_rel,
                                     const ModeSolveOptions& opts) {
  const double R1 = setup.R1();
  const double R_scat = medium.R_scat();
  const double inner_norm =
      opts.obstacle_radius ? *opts.obstacle_radius : 1e-3 / k;

  const auto src_quad = radial_quad(R_scat, R1, k);
  const auto nrm_quad = radial_quad(inner_norm, R1, k);

  TruncationError out{0.0, 0.0, 0.0, 0, {}};
  double err2 = 0.0, g2 = 0.0;

  auto mode_l2 = [&](const std::function<Complex(double)>& g_n) {
    double gn2 = 0.0;
    for (size_t q = 0; q < src_quad.r.size(); ++q)
      gn2 += std::norm(g_n(src_quad.r[q])) * src_quad.r[q] * src_quad.w[q];
    return gn2;
  };
  auto mode_err2 = [&](int n, const std::function<Complex(double)>& g_n) {
    const auto u_n = exact_outgoing_mode(n, k, medium, g_n, R1, R1, opts);
    const auto v_n = radial_mode_pml_solve(n, k, setup, medium, g_n, opts);
    double en2 = 0.0;
    for (size_t q = 0; q < nrm_quad.r.size(); ++q) {
      const double r = nrm_quad.r[q];
      const Complex de = u_n.value(r) - v_n.value(r);
      const Complex dd = u_n.deriv(r) - v_n.deriv(r);
      en2 += (std::norm(dd) + (double(n) * n / (r * r) + k * k) * std::norm(de)) *
             r * nrm_quad.w[q];
    }
    return en2;
  };

  if (source.kind == SourceSpec::Kind::Ring) {
    const int n = std::abs(source.ring_n);
    const double gn2 = mode_l2(source.ring_profile);
    const double en2 = mode_err2(n, source.ring_profile);
    err2 = en2;
    g2 = gn2;
    out.mode_errors.push_back(std::sqrt(2.0 * M_PI * en2));
    out.n_modes = 1;
  } else {
    int quiet = 0;
    const int n_cap = int(std::ceil(k * setup.R_tr())) * 3 + 40;
    for (int n = 0;; ++n) {
      if (n > n_cap)
        throw std::runtime_error("pml_truncation_error: mode tail not converged");
      auto g_n = [n, k, R_scat, R1](double r) {
        return plane_wave_modal_load(n, k, R_scat, R1, r);
      };
      const double weight = (n == 0) ? 1.0 : 2.0;
      const double gn2 = mode_l2(g_n);
      if (gn2 * weight <= tail_rel * tail_rel * std::max(g2, 1e-280) &&
          double(n) > k * R1) {
        if (++quiet >= 3) break;
        continue;
      }
      quiet = 0;
      if (gn2 == 0.0) continue;
      const double en2 = mode_err2(n, g_n);
      err2 += weight * en2;
      g2 += weight * gn2;
      out.mode_errors.push_back(std::sqrt(2.0 * M_PI * weight * en2));
      out.n_modes = n + 1;
    }
  }
  out.err_h1k = std::sqrt(2.0 * M_PI * err2);
  out.g_l2 = std::sqrt(2.0 * M_PI * g2);
  if (out.g_l2 == 0.0) throw std::invalid_argument("pml_truncation_error: zero source");
  out.ratio = out.err_h1k / out.g_l2;
  return out;
}

std::vector<Complex> disk_scattering_total_field(double k, double a, double phi_inc,
                                                 const std::vector<Point>& pts) {
  if (!(a > 0.0)) throw std::invalid_argument("disk scattering: a <= 0");
  std::vector<Complex> out(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    const double r = std::hypot(pts[i].x, pts[i].y);
    if (r < a * (1.0 - 1e-12))
      throw std::domain_error("disk scattering: point inside obstacle");
  }
  for (size_t i = 0; i < pts.size(); ++i) {
    const double r = std::hypot(pts[i].x, pts[i].y);
    const double psi = std::atan2(pts[i].y, pts[i].x) - phi_inc;
    // incident field
    Complex u = std::exp(kI * (k * r * std::cos(psi)));
    Complex sum = 0.0;
    int quiet = 0;
    for (int n = 0; n <= 2100; ++n) {
      double Ja, Ya, Jr, Yr;
      try {
        const auto pa = bessel::bessel_pair(n, k * a);
        const auto pr = bessel::bessel_pair(n, k * r);
        Ja = pa.J;
        Ya = pa.Y;
        Jr = pr.J;
        Yr = pr.Y;
      } catch (const std::range_error&) {
        break;  // far past the evanescent tail
      }
      const Complex Ha(Ja, Ya), Hr(Jr, Yr);
      const Complex rho = Ja / Ha;
      const Complex term = -ipow(n) * rho * Hr *
                           (n == 0 ? Complex(1.0) : 2.0 * std::cos(n * psi));
      sum += term;
      const double mag = std::abs(term);
      if (double(n) > k * std::max(a, r) && mag <= 1e-16 * std::max(1.0, std::abs(sum))) {
        if (++quiet >= 4) break;
      } else {
        quiet = 0;
      }
    }
    out[i] = u + sum;
  }
  return out;
}

CrossSections disk_cross_sections(double k, double a) {
  double mode_sum = 0.0;
  Complex coef_sum = 0.0;
  int quiet = 0;
  for (int n = 0; n <= 2100; ++n) {
    double Ja, Ya;
    try {
      const auto pa = bessel::bessel_pair(n, k * a);
      Ja = pa.J;
      Ya = pa.Y;
    } catch (const std::range_error&) {
      break;
    }
    const Complex rho = Ja / Complex(Ja, Ya);  // -c_n of the scattered series
    const double w = (n == 0) ? 1.0 : 2.0;
    mode_sum += w * std::norm(rho);
    coef_sum += w * (-rho);
    if (double(n) > k * a && std::norm(rho) <= 1e-30) {
      if (++quiet >= 4) break;
    } else {
      quiet = 0;
    }
  }
  CrossSections cs;
  cs.mode_sum = 4.0 / k * mode_sum;
  // Forward amplitude f(0) = sqrt(2/(pi k)) e^{-i pi/4} sum c_n, and the
  // optical theorem sigma = -sqrt(8 pi / k) Re(e^{i pi/4} f(0)).
  const Complex f0 = std::sqrt(2.0 / (M_PI * k)) *
                     std::exp(-kI * (M_PI / 4.0)) * coef_sum;
  cs.forward_amplitude =
      -std::sqrt(8.0 * M_PI / k) *
      (std::exp(kI * (M_PI / 4.0)) * f0).real();
  return cs;
}

ModalExpansion ModalExpansion::pml_solution(double k, const PmlSetup& setup,
                                            const MediumSpec& medium,
                                            const SourceSpec& source,
                                            double tail_rel,
                                            const ModeSolveOptions& opts) {
  ModalExpansion me;
  me.k_ = k;
  const double R1 = setup.R1();
  const double R_scat = medium.R_scat();
  const auto src_quad = radial_quad(R_scat, R1, k);

  if (source.kind == SourceSpec::Kind::Ring) {
    Mode m;
    m.n = std::abs(source.ring_n);
    m.fold = false;
    m.phase = 1.0;
    m.V = radial_mode_pml_solve(m.n, k, setup, medium, source.ring_profile, opts);
    me.modes_.push_back(std::move(m));
    return me;
  }

  double g2 = 0.0;
  int quiet = 0;
  const int n_cap = int(std::ceil(k * setup.R_tr())) * 3 + 40;
  for (int n = 0; n <= n_cap; ++n) {
    auto g_n = [n, k, R_scat, R1](double r) {
      return plane_wave_modal_load(n, k, R_scat, R1, r);
    };
    double gn2 = 0.0;
    for (size_t q = 0; q < src_quad.r.size(); ++q)
      gn2 += std::norm(g_n(src_quad.r[q])) * src_quad.r[q] * src_quad.w[q];
    const double w = (n == 0) ? 1.0 : 2.0;
    if (gn2 * w <= tail_rel * tail_rel * std::max(g2, 1e-280) && double(n) > k * R1) {
      if (++quiet >= 3) break;
      continue;
    }
    quiet = 0;
    g2 += gn2 * w;
    Mode m;
    m.n = n;
    m.fold = (n > 0);
    m.phase = std::exp(-kI * (double(n) * source.phi_inc));
    m.V = radial_mode_pml_solve(n, k, setup, medium, g_n, opts);
    me.modes_.push_back(std::move(m));
  }
  return me;
}

double ModalExpansion::inner_radius() const {
  double r = 0.0;
  for (const auto& m : modes_) r = std::max(r, m.V.left());
  return r;
}

double ModalExpansion::outer_radius() const {
  double r = 1e300;
  for (const auto& m : modes_) r = std::min(r, m.V.right());
  return r;
}

Complex ModalExpansion::value(double x, double y) const {
  Complex v, dx, dy;
  value_and_gradient(x, y, v, dx, dy);
  return v;
}

void ModalExpansion::value_and_gradient(double x, double y, Complex& v,
                                        Complex& dx, Complex& dy) const {
  const double r = std::hypot(x, y);
  const double phi = std::atan2(y, x);
  const double r_in = inner_radius();
  v = dx = dy = 0.0;
  const double cr = (r > 1e-300) ? x / r : 1.0;
  const double sr = (r > 1e-300) ? y / r : 0.0;
  for (const auto& m : modes_) {
    Complex V, dV;
    double rr = r;
    if (r < r_in) {
      // Inside the regularity collar: V ~ V(r_in) (r/r_in)^n.
      const Complex Vin = m.V.value(r_in);
      const double t = r / r_in;
      V = Vin * std::pow(t, m.n);
      dV = (m.n == 0) ? 0.0 : Vin * double(m.n) * std::pow(t, m.n - 1) / r_in;
      rr = std::max(r, 1e-300);
    } else {
      V = m.V.value(r);
      dV = m.V.deriv(r);
    }
    Complex ang, dang;  // angular factor and its phi-derivative
    if (m.fold) {
      // phase e^{i n phi} + conj(phase) e^{-i n phi} = 2 cos(n(phi - phi_inc))
      const Complex e = std::exp(kI * (double(m.n) * phi));
      ang = m.phase * e + std::conj(m.phase * e);
      dang = kI * double(m.n) * (m.phase * e - std::conj(m.phase * e));
    } else if (m.n == 0) {
      ang = m.phase;
      dang = 0.0;
    } else {
      const Complex e = std::exp(kI * (double(m.n) * phi));
      ang = m.phase * e;
      dang = kI * double(m.n) * ang;
    }
    v += V * ang;
    const Complex dr_part = dV * ang;
    const Complex dphi_part = (rr > 1e-300) ? V * dang / rr : Complex(0.0);
    dx += dr_part * cr - dphi_part * sr;
    dy += dr_part * sr + dphi_part * cr;
  }
}

TabulatedModal::TabulatedModal(const ModalExpansion& me, int points_per_wavelength) {
  k_ = me.k();
  r0_ = me.inner_radius();
  r1_ = me.outer_radius();
  const double wavelen = 2.0 * M_PI / k_;
  n_r_ = std::max(600, int(std::ceil((r1_ - r0_) / wavelen * points_per_wavelength)));
  dr_ = (r1_ - r0_) / n_r_;
  for (const auto& m : me.modes()) {
    ModeTab t;
    t.n = m.n;
    t.fold = m.fold;
    t.phase = m.phase;
    t.V.resize(size_t(n_r_) + 1);
    t.dV.resize(size_t(n_r_) + 1);
    t.ddV.resize(size_t(n_r_) + 1);
    for (int i = 0; i <= n_r_; ++i) {
      const double r = r0_ + dr_ * i;
      t.V[size_t(i)] = m.V.value(std::min(r, r1_));
      t.dV[size_t(i)] = m.V.deriv(std::min(r, r1_));
    }
    for (int i = 0; i <= n_r_; ++i) {
      const auto& d = t.dV;
      if (i >= 2 && i <= n_r_ - 2) {
        t.ddV[size_t(i)] = (-d[size_t(i) + 2] + 8.0 * d[size_t(i) + 1] -
                            8.0 * d[size_t(i) - 1] + d[size_t(i) - 2]) /
                           (12.0 * dr_);
      } else if (i >= 1 && i <= n_r_ - 1) {
        t.ddV[size_t(i)] = (d[size_t(i) + 1] - d[size_t(i) - 1]) / (2.0 * dr_);
      } else if (i == 0) {
        t.ddV[0] = (-3.0 * d[0] + 4.0 * d[1] - d[2]) / (2.0 * dr_);
      } else {
        t.ddV[size_t(i)] =
            (3.0 * d[size_t(i)] - 4.0 * d[size_t(i) - 1] + d[size_t(i) - 2]) /
            (2.0 * dr_);
      }
    }
    modes_.push_back(std::move(t));
  }
}

Complex TabulatedModal::value(double x, double y) const {
  Complex v, dx, dy;
  value_and_gradient(x, y, v, dx, dy);
  return v;
}

void TabulatedModal::value_and_gradient(double x, double y, Complex& v,
                                        Complex& dx, Complex& dy) const {
  const double r = std::hypot(x, y);
  const double phi = std::atan2(y, x);
  v = dx = dy = 0.0;
  const double cr = (r > 1e-300) ? x / r : 1.0;
  const double sr = (r > 1e-300) ? y / r : 0.0;
  const double rc = std::clamp(r, r0_, r1_);
  const int cell = std::min(n_r_ - 1, int((rc - r0_) / dr_));
  const double s = (rc - (r0_ + dr_ * cell)) / dr_;
  // cubic Hermite basis
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  const Complex ei = std::exp(kI * phi);
  for (const auto& m : modes_) {
    const size_t i = size_t(cell);
    Complex V, dV;
    if (r < r0_) {
      const Complex Vin = m.V[0];
      const double t = r / r0_;
      V = Vin * std::pow(t, m.n);
      dV = (m.n == 0) ? 0.0 : Vin * double(m.n) * std::pow(t, m.n - 1) / r0_;
    } else {
      V = h00 * m.V[i] + h10 * dr_ * m.dV[i] + h01 * m.V[i + 1] +
          h11 * dr_ * m.dV[i + 1];
      dV = h00 * m.dV[i] + h10 * dr_ * m.ddV[i] + h01 * m.dV[i + 1] +
           h11 * dr_ * m.ddV[i + 1];
    }
    Complex ang, dang;
    if (m.fold) {
      // e^{i n phi} by repeated multiplication would drift; use direct eval
      const Complex e = std::pow(ei, m.n);
      const Complex pe = m.phase * e;
      ang = pe + std::conj(pe);
      dang = kI * double(m.n) * (pe - std::conj(pe));
    } else if (m.n == 0) {
      ang = m.phase;
      dang = 0.0;
    } else {
      const Complex e = std::pow(ei, m.n);
      ang = m.phase * e;
      dang = kI * double(m.n) * ang;
    }
    v += V * ang;
    const double rr = std::max(r, 1e-300);
    const Complex dr_part = dV * ang;
    const Complex dphi_part = V * dang / rr;
    dx += dr_part * cr - dphi_part * sr;
    dy += dr_part * sr + dphi_part * cr;
  }
}

}  // namespace helmpml::oracles
