// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/torus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "helmpml/fft.hpp"
#include "helmpml/smoothstep.hpp"

namespace helmpml::torus {

TorusGrid::TorusGrid(double R_sharp, int N, int d)
    : R_sharp_(R_sharp), N_(N), d_(d) {
  if (!(R_sharp > 0.0)) throw std::invalid_argument("TorusGrid: R_sharp <= 0");
  if (!fft::is_power_of_two(N)) throw std::invalid_argument("TorusGrid: N not 2^m");
  if (d != 1 && d != 2) throw std::invalid_argument("TorusGrid: d must be 1 or 2");
}

double TorusGrid::cell_volume() const {
  const double h = 2.0 * R_sharp_ / N_;
  return d_ == 1 ? h : h * h;
}

bool TorusGrid::resolves(double k) const {
  return M_PI * N_ / (2.0 * R_sharp_) >= 4.0 * k;
}

int TorusGrid::suggest_N(double R_sharp, double k) {
  int N = 16;
  while (M_PI * N / (2.0 * R_sharp) < 4.0 * k) N *= 2;
  return N;
}

TorusField::TorusField(const TorusGrid& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("TorusField: size mismatch");
}

TorusField TorusField::zero(const TorusGrid& grid) {
  return TorusField(grid, std::vector<Complex>(grid.size(), Complex(0.0)));
}

Complex& TorusField::at(int ix, int iy) {
  return values_[grid_.dim() == 1 ? size_t(ix)
                                  : size_t(ix) * grid_.N() + size_t(iy)];
}
const Complex& TorusField::at(int ix, int iy) const {
  return values_[grid_.dim() == 1 ? size_t(ix)
                                  : size_t(ix) * grid_.N() + size_t(iy)];
}

TorusField TorusField::from_function(
    const TorusGrid& grid, const std::function<Complex(double, double)>& f) {
  TorusField out = zero(grid);
  const int N = grid.N();
  if (grid.dim() == 1) {
    for (int i = 0; i < N; ++i) out.at(i) = f(grid.coord(i), 0.0);
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) out.at(i, j) = f(grid.coord(i), grid.coord(j));
  }
  return out;
}

TorusField TorusField::basis_mode(const TorusGrid& grid, std::array<int, 2> j) {
  const double norm = std::pow(2.0 * grid.R_sharp(), -0.5 * grid.dim());
  const double w = M_PI / grid.R_sharp();
  return from_function(grid, [&](double x, double y) {
    return norm * std::exp(Complex(0.0, w * (j[0] * x + j[1] * y)));
  });
}

// The grid values f(x_m) relate to the orthonormal-basis coefficients by a
// plain DFT plus the phase (-1)^{sum j} from the half-period offset of the
// fundamental domain.
std::vector<Complex> TorusField::coefficients() const {
  const int N = grid_.N();
  const int d = grid_.dim();
  std::vector<Complex> c = values_;
  if (d == 1)
    fft::transform(c.data(), N, -1);
  else
    fft::transform_2d(c.data(), N, -1);
  const double scale =
      std::pow(2.0 * grid_.R_sharp(), 0.5 * d) / std::pow(double(N), d);
  if (d == 1) {
    for (int i = 0; i < N; ++i) {
      const int j = grid_.freq(i);
      c[size_t(i)] *= scale * ((j % 2 == 0) ? 1.0 : -1.0);
    }
  } else {
    for (int i = 0; i < N; ++i)
      for (int l = 0; l < N; ++l) {
        const int js = grid_.freq(i) + grid_.freq(l);
        c[size_t(i) * N + l] *= scale * ((((js % 2) + 2) % 2 == 0) ? 1.0 : -1.0);
      }
  }
  return c;
}

TorusField TorusField::from_coefficients(const TorusGrid& grid,
                                         std::vector<Complex> c) {
  const int N = grid.N();
  const int d = grid.dim();
  if (c.size() != grid.size())
    throw std::invalid_argument("from_coefficients: size mismatch");
  // Unscaled inverse FFT is precisely the synthesis sum, so only the basis
  // normalization and the half-period phase remain.
  const double scale = std::pow(2.0 * grid.R_sharp(), -0.5 * d);
  if (d == 1) {
    for (int i = 0; i < N; ++i) {
      const int j = grid.freq(i);
      c[size_t(i)] *= ((j % 2 == 0) ? 1.0 : -1.0) * scale;
    }
    fft::transform(c.data(), N, +1);
  } else {
    for (int i = 0; i < N; ++i)
      for (int l = 0; l < N; ++l) {
        const int js = grid.freq(i) + grid.freq(l);
        c[size_t(i) * N + l] *= ((((js % 2) + 2) % 2 == 0) ? 1.0 : -1.0) * scale;
      }
    fft::transform_2d(c.data(), N, +1);
  }
  return TorusField(grid, std::move(c));
}

double TorusField::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s * grid_.cell_volume());
}

double TorusField::l2_norm_within(double radius) const {
  const int N = grid_.N();
  double s = 0.0;
  if (grid_.dim() == 1) {
    for (int i = 0; i < N; ++i)
      if (std::abs(grid_.coord(i)) <= radius) s += std::norm(at(i));
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (std::hypot(grid_.coord(i), grid_.coord(j)) <= radius)
          s += std::norm(at(i, j));
  }
  return std::sqrt(s * grid_.cell_volume());
}

namespace {

double lambda_of(const TorusGrid& g, int jx, int jy, double k) {
  const double w = M_PI / (k * g.R_sharp());
  return w * w * (double(jx) * jx + double(jy) * jy);
}

}  // namespace

TorusField apply_multiplier(const TorusField& field, const MultiplierSpec& spec) {
  const auto& g = field.grid();
  auto c = field.coefficients();
  const int N = g.N();
  if (g.dim() == 1) {
    for (int i = 0; i < N; ++i)
      c[size_t(i)] *= spec.f(lambda_of(g, g.freq(i), 0, spec.k));
  } else {
    for (int i = 0; i < N; ++i)
      for (int l = 0; l < N; ++l)
        c[size_t(i) * N + l] *= spec.f(lambda_of(g, g.freq(i), g.freq(l), spec.k));
  }
  return TorusField::from_coefficients(g, std::move(c));
}

double multiplier_sup(const TorusGrid& g, const MultiplierSpec& spec) {
  double s = 0.0;
  const int N = g.N();
  if (g.dim() == 1) {
    for (int i = 0; i < N; ++i)
      s = std::max(s, std::abs(spec.f(lambda_of(g, g.freq(i), 0, spec.k))));
  } else {
    for (int i = 0; i < N; ++i)
      for (int l = 0; l < N; ++l)
        s = std::max(s,
                     std::abs(spec.f(lambda_of(g, g.freq(i), g.freq(l), spec.k))));
  }
  return s;
}

Cutoffs build_cutoffs(double mu) {
  if (!(mu > 2.0)) throw std::invalid_argument("build_cutoffs: mu <= 2");
  Cutoffs c;
  c.mu = mu;
  c.mu_prime = 0.5 * mu;
  c.Lambda = 2.0 * mu;
  auto psi = [](double s) {
    const double a = std::abs(s);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    return 1.0 - smooth_step(a - 1.0).s;
  };
  c.psi_mu = [psi, mu](double t) { return psi(t / mu); };
  c.psi_mu_prime = [psi, mp = c.mu_prime](double t) { return psi(t / mp); };
  return c;
}

TorusField radial_cutoff_field(const TorusGrid& grid, double R1, double delta) {
  const double lo = R1 * (1.0 + delta);
  const double hi = R1 * (1.0 + 2.0 * delta);
  return TorusField::from_function(grid, [&](double x, double y) {
    const double r = std::hypot(x, y);
    return Complex(smooth_step_down(r, lo, hi).s, 0.0);
  });
}

Decomposition decompose_solution(const TorusField& v, const TorusField& phi_tr,
                                 const CutoffGeometry& geom, double mu, double k) {
  const auto& g = v.grid();
  if (&phi_tr.grid() != &g && phi_tr.grid().size() != g.size())
    throw std::invalid_argument("decompose_solution: grid mismatch");
  // Validate the cutoff support constraints.
  const int N = g.N();
  const double lo = geom.R1 * (1.0 + geom.delta);
  const double hi = geom.R1 * (1.0 + 2.0 * geom.delta);
  for (int i = 0; i < N; ++i)
    for (int l = 0; l < (g.dim() == 2 ? N : 1); ++l) {
      const double r = g.dim() == 2 ? std::hypot(g.coord(i), g.coord(l))
                                    : std::abs(g.coord(i));
      const Complex p = g.dim() == 2 ? phi_tr.at(i, l) : phi_tr.at(i);
      if (r <= lo && std::abs(p - 1.0) > 1e-12)
        throw std::invalid_argument("decompose_solution: phi_tr != 1 inside collar");
      if (r >= hi && std::abs(p) > 1e-12)
        throw std::invalid_argument("decompose_solution: phi_tr not supported");
      if (p.imag() != 0.0 || p.real() < -1e-15 || p.real() > 1.0 + 1e-15)
        throw std::invalid_argument("decompose_solution: phi_tr out of [0,1]");
    }
  const auto cut = build_cutoffs(mu);
  TorusField phi_v = v;
  TorusField v_pml = v;
  for (size_t i = 0; i < phi_v.values().size(); ++i) {
    phi_v.values()[i] *= phi_tr.values()[i];
    v_pml.values()[i] *= (1.0 - phi_tr.values()[i]);
  }
  Decomposition out{
      apply_multiplier(phi_v, {cut.psi_mu, k}),
      apply_multiplier(phi_v, {[&cut](double t) { return 1.0 - cut.psi_mu(t); }, k}),
      std::move(v_pml)};
  return out;
}

TorusField spectral_derivative(const TorusField& field, std::array<int, 2> alpha) {
  const auto& g = field.grid();
  auto c = field.coefficients();
  const int N = g.N();
  const double w = M_PI / g.R_sharp();
  if (g.dim() == 1) {
    for (int i = 0; i < N; ++i) {
      const Complex f(0.0, w * g.freq(i));
      c[size_t(i)] *= std::pow(f, alpha[0]);
    }
  } else {
    for (int i = 0; i < N; ++i)
      for (int l = 0; l < N; ++l) {
        const Complex fx(0.0, w * g.freq(i));
        const Complex fy(0.0, w * g.freq(l));
        c[size_t(i) * N + l] *= std::pow(fx, alpha[0]) * std::pow(fy, alpha[1]);
      }
  }
  return TorusField::from_coefficients(g, std::move(c));
}

double derivative_norm(const TorusField& field, std::array<int, 2> alpha) {
  const auto& g = field.grid();
  const auto c = field.coefficients();
  const int N = g.N();
  const double w = M_PI / g.R_sharp();
  double s = 0.0;
  if (g.dim() == 1) {
    for (int i = 0; i < N; ++i)
      s += std::norm(c[size_t(i)]) * std::pow(w * std::abs(double(g.freq(i))),
                                              2.0 * alpha[0]);
  } else {
    for (int i = 0; i < N; ++i)
      for (int l = 0; l < N; ++l) {
        const double ax = std::pow(w * std::abs(double(g.freq(i))), double(alpha[0]));
        const double ay = std::pow(w * std::abs(double(g.freq(l))), double(alpha[1]));
        s += std::norm(c[size_t(i) * N + l]) * ax * ax * ay * ay;
      }
  }
  return std::sqrt(s);
}

TorusField heat_propagator(const TorusField& field, double t, double k) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_propagator: t <= 0");
  return apply_multiplier(field, {[t](double lam) { return std::exp(-t * lam); }, k});
}

const char* growth_class_name(GrowthClass cls) {
  switch (cls) {
    case GrowthClass::Entire: return "entire";
    case GrowthClass::RadiusInvK: return "radius_prop_inv_k";
    case GrowthClass::RadiusKIndependent: return "radius_k_independent";
    default: return "none";
  }
}

namespace {

struct LineFit {
  double slope, intercept, r2;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  LineFit f{0.0, 0.0, 0.0};
  if (den == 0.0) return f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double ybar = sy / n;
  for (size_t i = 0; i < n; ++i) {
    const double fit = f.slope * x[i] + f.intercept;
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace

GrowthFit classify_derivative_growth(const std::vector<double>& norms, double k) {
  GrowthFit out;
  if (norms.size() < 5) throw std::invalid_argument("growth fit: need m >= 4");
  for (double v : norms)
    if (!(v > 0.0)) return out;  // degenerate table

  const size_t M = norms.size();
  std::vector<double> ell(M), base(M);
  for (size_t m = 0; m < M; ++m) {
    ell[m] = double(m);
    base[m] = std::log(norms[m]);
  }
  // Model transforms: subtract the non-geometric factor, then fit a line in
  // the order; the better the model, the straighter the residual.
  auto lfact = [](size_t m) { return std::lgamma(double(m) + 1.0); };
  std::vector<double> y_entire = base, y_factorial = base, y_maxk = base;
  for (size_t m = 0; m < M; ++m) {
    y_factorial[m] -= lfact(m);
    y_maxk[m] -= double(m) * std::log(std::max(double(m), k));
  }
  const LineFit fe = fit_line(ell, y_entire);
  const LineFit ff = fit_line(ell, y_factorial);
  const LineFit fm = fit_line(ell, y_maxk);

  // Ties are resolved toward the stronger statement (entire first); for
  // orders below k the first and third laws coincide by construction.
  const double re = fe.r2, rf = ff.r2, rm = fm.r2;
  const double tie = 1e-9;
  if (re >= rf - tie && re >= rm - tie) {
    out.cls = GrowthClass::Entire;
    out.C = std::exp(fe.slope) / k;
    out.C_u = std::exp(fe.intercept);
    out.r_squared = re;
  } else if (rm >= rf - tie) {
    out.cls = GrowthClass::RadiusKIndependent;
    out.C = std::exp(fm.slope);
    out.C_u = std::exp(fm.intercept);
    out.r_squared = rm;
  } else {
    out.cls = GrowthClass::RadiusInvK;
    out.C = std::exp(ff.slope) / k;
    out.C_u = std::exp(ff.intercept);
    out.r_squared = rf;
  }
  return out;
}

double choose_mu(const TorusField& v, double k, double mass_tol) {
  const auto c = v.coefficients();
  const auto& g = v.grid();
  const int N = g.N();
  std::vector<std::pair<double, double>> mass;  // (lambda, |c|^2)
  double total = 0.0;
  if (g.dim() == 1) {
    for (int i = 0; i < N; ++i) {
      mass.emplace_back(lambda_of(g, g.freq(i), 0, k), std::norm(c[size_t(i)]));
      total += std::norm(c[size_t(i)]);
    }
  } else {
    for (int i = 0; i < N; ++i)
      for (int l = 0; l < N; ++l) {
        mass.emplace_back(lambda_of(g, g.freq(i), g.freq(l), k),
                          std::norm(c[size_t(i) * N + l]));
        total += std::norm(c[size_t(i) * N + l]);
      }
  }
  std::sort(mass.begin(), mass.end());
  double mu = 4.0;
  for (;;) {
    double above = 0.0;
    for (auto it = mass.rbegin(); it != mass.rend() && it->first > mu; ++it)
      above += it->second;
    if (above < mass_tol * total) return mu;
    mu += 1.0;
    if (mu > 1e6) throw std::runtime_error("choose_mu: no admissible mu");
  }
}

}  // namespace helmpml::torus
