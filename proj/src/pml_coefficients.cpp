// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/pml_coefficients.hpp"

#include <algorithm>
#include <cmath>

namespace helmpml {

namespace {

constexpr Complex kI{0.0, 1.0};

MatD rotation_to_radial(const Point& x, int d, double r) {
  MatD H = MatD::identity(d);
  if (d == 2) {
    const double phi = std::atan2(x.y, x.x);
    const double c = std::cos(phi), s = std::sin(phi);
    H(0, 0) = c;
    H(0, 1) = -s;
    H(1, 0) = s;
    H(1, 1) = c;
  } else {
    const double ct = x.z / r;                       // cos(polar)
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double phi = std::atan2(x.y, x.x);
    const double cp = std::cos(phi), sp = std::sin(phi);
    H(0, 0) = st * cp;
    H(0, 1) = ct * cp;
    H(0, 2) = -sp;
    H(1, 0) = st * sp;
    H(1, 1) = ct * sp;
    H(1, 2) = cp;
    H(2, 0) = ct;
    H(2, 1) = -st;
    H(2, 2) = 0.0;
  }
  return H;
}

}  // namespace

std::pair<Complex, Complex> alpha_beta(const PmlSetup& setup, double r) {
  if (r < setup.R1()) return {Complex(1.0), Complex(1.0)};
  const auto ft = setup.eval_theta(r);
  return {Complex(1.0, ft.df), Complex(1.0, ft.f / r)};
}

CoefficientSample pml_tensor(const PmlSetup& setup, const MediumSpec& medium,
                             const Point& x) {
  const int d = setup.dim();
  const double r = x.r();
  CoefficientSample out;
  out.D = MatD::identity(d);
  out.H = MatD::identity(d);
  if (r < setup.R1()) {
    if (medium.R_scat() >= setup.R1())
      throw std::invalid_argument("pml_tensor: R_scat must be < R1");
    out.A = medium.A(x, d);
    const double c = medium.c(x);
    out.c_inv2 = 1.0 / (c * c);
    return out;
  }
  const auto [alpha, beta] = alpha_beta(setup, r);
  out.alpha = alpha;
  out.beta = beta;
  if (d == 2) {
    out.D(0, 0) = beta / alpha;
    out.D(1, 1) = alpha / beta;
    out.c_inv2 = alpha * beta;
  } else {
    out.D(0, 0) = beta * beta / alpha;
    out.D(1, 1) = alpha;
    out.D(2, 2) = alpha;
    out.c_inv2 = alpha * beta * beta;
  }
  out.H = rotation_to_radial(x, d, r);
  out.A = out.H * out.D * transpose(out.H);
  return out;
}

std::vector<double> re_part_spectrum(const PmlSetup& setup, double r) {
  if (r < setup.R1())
    throw std::domain_error("re_part_spectrum: r < R1 (D undefined)");
  const auto ft = setup.eval_theta(r);
  const double g = ft.f / r;   // f_theta / r
  const double fp = ft.df;     // f_theta'
  std::vector<double> ev;
  if (setup.dim() == 2) {
    ev = {(1.0 + g * fp) / (1.0 + fp * fp), (1.0 + g * fp) / (1.0 + g * g)};
  } else {
    // Re(beta^2 / alpha) expanded from first principles; note the printed
    // form's first denominator disagrees (see tests).
    ev = {(1.0 - g * g + 2.0 * g * fp) / (1.0 + fp * fp), 1.0, 1.0};
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

AnalyticField plane_wave_field(double k, std::array<double, 3> a, int d) {
  double n2 = a[0] * a[0] + a[1] * a[1] + (d == 3 ? a[2] * a[2] : 0.0);
  const double nrm = std::sqrt(n2);
  for (auto& v : a) v /= nrm;
  if (d == 2) a[2] = 0.0;
  AnalyticField f;
  f.value = [k, a](const Point& p) {
    return std::exp(kI * (k * (a[0] * p.x + a[1] * p.y + a[2] * p.z)));
  };
  f.gradient = [k, a, f0 = f.value](const Point& p) {
    const Complex v = f0(p);
    return std::array<Complex, 3>{kI * k * a[0] * v, kI * k * a[1] * v,
                                  kI * k * a[2] * v};
  };
  f.hessian = [k, a, d, f0 = f.value](const Point& p) {
    const Complex v = f0(p);
    MatD h = MatD::zero(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) h(i, j) = -k * k * a[size_t(i)] * a[size_t(j)] * v;
    return h;
  };
  return f;
}

AnalyticField constant_field(Complex value, int d) {
  AnalyticField f;
  f.value = [value](const Point&) { return value; };
  f.gradient = [](const Point&) { return std::array<Complex, 3>{}; };
  f.hessian = [d](const Point&) { return MatD::zero(d); };
  return f;
}

double operator_consistency_residual(const PmlSetup& setup,
                                     const MediumSpec& medium,
                                     const AnalyticField& u, const Point& x) {
  const int d = setup.dim();
  const double r = x.r();
  // the identity holds where the scatterer coefficients are trivial
  if (medium.R_scat() >= setup.R1())
    throw std::invalid_argument("operator_consistency_residual: R_scat >= R1");
  if (r <= setup.R1())
    throw std::domain_error("operator_consistency_residual: |x| <= R1");

  const auto ft = setup.eval_theta(r);
  const Complex alpha(1.0, ft.df);
  const Complex beta(1.0, ft.f / r);
  const Complex dalpha = kI * ft.ddf;                    // alpha'(r)
  const Complex dbeta = kI * (ft.df - ft.f / r) / r;     // beta'(r)

  // Radial/tangential multipliers of A and their radial derivatives.
  Complex m_r, m_t, dm_r;
  if (d == 2) {
    m_r = beta / alpha;
    m_t = alpha / beta;
    dm_r = (dbeta * alpha - beta * dalpha) / (alpha * alpha);
  } else {
    m_r = beta * beta / alpha;
    m_t = alpha;
    dm_r = (2.0 * beta * dbeta * alpha - beta * beta * dalpha) / (alpha * alpha);
  }

  const std::array<double, 3> xs{x.x, x.y, x.z};
  std::array<double, 3> rh{};  // unit radial direction
  for (int i = 0; i < d; ++i) rh[size_t(i)] = xs[size_t(i)] / r;

  const auto grad = u.gradient(x);
  const MatD hess = u.hessian(x);

  // Divergence-form side: sum_j A_jl d2u/(dxj dxl) + (div A)_l du/dxl with
  // A = m_t I + (m_r - m_t) rhat rhat^T differentiated in closed form.
  Complex div_form = 0.0;
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l) {
      const double rr = rh[size_t(j)] * rh[size_t(l)];
      const Complex Ajl = (j == l ? m_t : Complex(0.0)) + (m_r - m_t) * rr;
      div_form += Ajl * hess(j, l);
    }
  // With A = m_t I + (m_r - m_t) rhat rhat^T and d rhat_a / d x_b =
  // (delta_ab - rhat_a rhat_b)/r, the column divergence collapses to
  // (div A)_l = [m_r' + (d-1)(m_r - m_t)/r] rhat_l.
  const Complex div_scalar = dm_r + double(d - 1) * (m_r - m_t) / r;
  for (int l = 0; l < d; ++l)
    div_form += div_scalar * rh[size_t(l)] * grad[size_t(l)];
  const Complex c2 = 1.0 / (alpha * (d == 2 ? beta : beta * beta));
  const Complex lhs = c2 * div_form;

  // Polar-coordinate form of Delta_theta applied to u.
  Complex u_r = 0.0, u_rr = 0.0, lap = 0.0;
  for (int i = 0; i < d; ++i) {
    u_r += grad[size_t(i)] * rh[size_t(i)];
    lap += hess(i, i);
    for (int j = 0; j < d; ++j) u_rr += rh[size_t(i)] * hess(i, j) * rh[size_t(j)];
  }
  const Complex lap_sphere = r * r * (lap - u_rr) - double(d - 1) * r * u_r;
  const Complex rb = r * beta;  // r + i f_theta
  const Complex rhs = u_rr / (alpha * alpha) - dalpha * u_r / (alpha * alpha * alpha) +
                      double(d - 1) * u_r / (rb * alpha) + lap_sphere / (rb * rb);

  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

AssumptionReport assumption_report(const PmlSetup& setup, int n_grid,
                                   double wide_spread_threshold) {
  AssumptionReport rep;
  rep.wide_spread_threshold = wide_spread_threshold;
  const double r_lo = setup.R1();
  const double r_hi = std::max(2.0 * setup.R2(), setup.R_tr());
  double prev_g = 0.0;
  for (int i = 0; i <= n_grid; ++i) {
    const double r = r_lo + (r_hi - r_lo) * double(i) / n_grid;
    const auto [alpha, beta] = alpha_beta(setup, std::max(r, r_lo));
    const double g = (setup.eval_theta(r).f) / r;
    if (i > 0 && g < prev_g - 1e-12) rep.f_over_r_nondecreasing = false;
    prev_g = g;
    const std::array<Complex, 4> vals{alpha, beta * beta / alpha, beta / alpha,
                                      alpha / beta};
    double spread = 0.0;
    for (size_t a = 0; a < vals.size(); ++a) {
      rep.max_abs_imag = std::max(rep.max_abs_imag, std::abs(vals[a].imag()));
      for (size_t b = a + 1; b < vals.size(); ++b) {
        double diff = std::abs(std::arg(vals[a]) - std::arg(vals[b]));
        if (diff > M_PI) diff = 2.0 * M_PI - diff;
        spread = std::max(spread, diff);
      }
    }
    rep.max_argument_spread = std::max(rep.max_argument_spread, spread);
    if (spread > M_PI - 1e-12) rep.half_plane_violations.push_back({r, spread});
    double d_ab = std::abs(std::arg(vals[0]) - std::arg(vals[1]));
    if (d_ab > M_PI) d_ab = 2.0 * M_PI - d_ab;
    if (d_ab > wide_spread_threshold) rep.wide_spread_radii.push_back({r, d_ab});
  }
  return rep;
}

CoefficientBounds scan_coefficient_bounds(const PmlSetup& setup,
                                          const MediumSpec& medium,
                                          int n_grid) {
  CoefficientBounds b{0.0, 1e300, 0.0, 0.0, 0.0};
  const double r_hi = setup.R_tr();
  for (int i = 0; i <= n_grid; ++i) {
    const double r = r_hi * double(i) / n_grid;
    // Radial scan; the tensors depend on the direction only through the
    // rotation H, which leaves the scanned invariants unchanged.
    const Point x{r, 0.0, 0.0};
    const auto s = pml_tensor(setup, medium, x);
    b.A_plus = std::max(b.A_plus, spectral_norm(s.A));
    b.A_minus = std::min(b.A_minus, real_part_eigenvalues(s.A)[0]);
    b.c_minus_inv2 = std::max(b.c_minus_inv2, std::abs(s.c_inv2));
    b.c_min_inv2 = std::max(b.c_min_inv2, s.c_inv2.real());
  }
  b.A_plus *= 1.05;
  b.A_minus /= 1.05;
  b.c_minus_inv2 *= 1.05;
  b.c_min_inv2 *= 1.05;
  b.C_cont = std::max(b.A_plus, b.c_minus_inv2);
  return b;
}

}  // namespace helmpml
