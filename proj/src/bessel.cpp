// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/bessel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace helmpml::bessel {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kOverflowGuard = 1e290;

// Ascending series for J_0, J_1 (used for z < 2 where there is no
// cancellation to speak of).
void j01_series(double z, double& j0, double& j1) {
  const double q = 0.25 * z * z;
  double term0 = 1.0, term1 = 0.5 * z;
  double s0 = term0, s1 = term1;
  for (int m = 1; m < 64; ++m) {
    term0 *= -q / (double(m) * m);
    term1 *= -q / (double(m) * (m + 1));
    s0 += term0;
    s1 += term1;
    if (std::abs(term0) < 1e-18 * std::abs(s0) &&
        std::abs(term1) < 1e-18 * std::max(std::abs(s1), 1e-300))
      break;
  }
  j0 = s0;
  j1 = s1;
}

// Log-series for Y_0, Y_1 (z < 2).
void y01_series(double z, double j0, double j1, double& y0, double& y1) {
  const double q = 0.25 * z * z;
  const double lg = std::log(0.5 * z) + kEulerGamma;

  double term = 1.0, hsum = 0.0, s = 0.0;
  for (int m = 1; m < 64; ++m) {
    term *= -q / (double(m) * m);
    hsum += 1.0 / m;
    const double add = -term * hsum;  // (-1)^{m+1} H_m q^m / (m!)^2
    s += add;
    if (std::abs(add) < 1e-18 * std::max(std::abs(s), 1e-30)) break;
  }
  y0 = (2.0 / M_PI) * (lg * j0 + s);

  // Y_1 = (2/pi) ln(z/2) J_1 - 2/(pi z)
  //       - (z/(2 pi)) sum_k (-q)^k (H_k + H_{k+1}) / (k! (k+1)!).
  double termk = 1.0;  // (-q)^k / (k! (k+1)!)
  double hk = 0.0, hk1 = 1.0;
  double s1 = termk * (hk + hk1);
  for (int m = 1; m < 64; ++m) {
    termk *= -q / (double(m) * (m + 1));
    hk += 1.0 / m;
    hk1 += 1.0 / (m + 1);
    const double add = termk * (hk + hk1);
    s1 += add;
    if (std::abs(add) < 1e-18 * std::max(std::abs(s1), 1e-30)) break;
  }
  y1 = (2.0 / M_PI) * (std::log(0.5 * z) + kEulerGamma) * j1 - 2.0 / (M_PI * z) -
       (z / (2.0 * M_PI)) * s1;
}

// Steed's method at order 0 (CF1 + CF2 + Wronskian), accurate for z >= 2.
void jy0_steed(double z, double& j0, double& dj0, double& y0, double& y1) {
  constexpr double eps = 1e-16;
  constexpr double fpmin = 1e-290;
  const double xi = 1.0 / z;
  const double xi2 = 2.0 * xi;

  // CF1 for f = J_0'/J_0 by the modified Lentz algorithm; isign tracks the
  // sign of J_0.
  int isign = 1;
  double h = fpmin;
  double b = 0.0;
  double d = 0.0, c = h;
  const int maxit = 40000 + int(4.0 * z);
  bool conv = false;
  for (int i = 1; i <= maxit; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b - 1.0 / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < eps) {
      conv = true;
      break;
    }
  }
  if (!conv) throw std::runtime_error("bessel: CF1 failed to converge");
  double f = h;
  double rjl = isign * fpmin;  // carries the CF1 sign of J_0

  // CF2 for p + i q = (J_0' + i Y_0')/(J_0 + i Y_0).
  double a = 0.25;
  double p = -0.5 * xi, q = 1.0;
  double br = 2.0 * z, bi = 2.0;
  double fact = a * xi / (p * p + q * q);
  double cr = br + q * fact, ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den, di = -bi / den;
  double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
  double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (int i = 2; i <= 100000; ++i) {
    a += 2 * (i - 1);
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < fpmin) dr = fpmin;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < fpmin) cr = fpmin;
    den = dr * dr + di * di;
    dr /= den;
    di /= -den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1.0) + std::abs(dli) < eps) break;
  }
  const double w = 2.0 / (M_PI * z);  // Wronskian J Y' - J' Y
  const double gam = (p - f) / q;
  j0 = std::sqrt(w / ((p - f) * gam + q));
  j0 = std::copysign(j0, rjl);
  y0 = gam * j0;
  const double dy0 = y0 * (p + q / gam);
  dj0 = f * j0;
  y1 = -dy0;  // Y_0' = -Y_1
}

}  // namespace

JYArrays jy_arrays(int nmax, double z) {
  if (nmax < 0) throw std::domain_error("jy_arrays: nmax < 0");
  if (!(z > 0.0)) throw std::domain_error("jy_arrays: z <= 0");
  if (nmax == 0) {
    // The order-zero derivatives need order one; compute and truncate.
    JYArrays full = jy_arrays(1, z);
    full.J.resize(1);
    full.dJ.resize(1);
    full.Y.resize(1);
    full.dY.resize(1);
    full.valid_orders = std::min(full.valid_orders, 1);
    return full;
  }
  JYArrays out;
  const size_t n = size_t(nmax) + 1;
  out.J.assign(n, 0.0);
  out.Y.assign(n, 0.0);
  out.dJ.assign(n, 0.0);
  out.dY.assign(n, 0.0);

  double j0, j1, y0, y1;
  if (z < 2.0) {
    j01_series(z, j0, j1);
    y01_series(z, j0, j1, y0, y1);
  } else {
    double dj0;
    jy0_steed(z, j0, dj0, y0, y1);
    j1 = -dj0;
  }

  // J array: stable upward recurrence while the order stays below the
  // argument, backward (Miller) recurrence with sum normalization above it.
  const int up_top = std::min(nmax, std::max(0, int(z) - 1));
  out.J[0] = j0;
  if (nmax >= 1) out.J[1] = j1;
  for (int m = 1; m < up_top; ++m)
    out.J[size_t(m) + 1] = (2.0 * m / z) * out.J[size_t(m)] - out.J[size_t(m) - 1];
  if (nmax > up_top && nmax >= 1) {
    const double big = std::max(double(nmax), z);
    int start = nmax + int(14.0 * std::cbrt(big)) + 40;
    start += start % 2;  // even start
    double next = 0.0, cur = 1e-280, sum = 0.0;
    std::vector<double> tail(static_cast<size_t>(nmax) + 1, 0.0);
    for (int m = start; m >= 1; --m) {
      const double prev = (2.0 * m / z) * cur - next;
      next = cur;
      cur = prev;
      if (m - 1 <= nmax) tail[size_t(m) - 1] = cur;
      if ((m - 1) % 2 == 0 && m - 1 > 0) sum += 2.0 * cur;
      if (std::abs(cur) > 1e270) {
        const double scale = 1e-270;
        cur *= scale;
        next *= scale;
        sum *= scale;
        for (auto& t : tail) t *= scale;
      }
    }
    sum += cur;  // normalization: J_0 + 2 sum_{m even > 0} J_m = 1
    for (int m = 0; m <= nmax; ++m) tail[size_t(m)] /= sum;
    // Keep the directly computed low orders; Miller fills the rest.
    for (int m = std::max(2, up_top + 1); m <= nmax; ++m)
      out.J[size_t(m)] = tail[size_t(m)];
    if (up_top < 1 && nmax >= 1) out.J[1] = tail[1];
  }

  // Y array: upward recurrence (the growing direction) with overflow guard.
  out.valid_orders = nmax + 1;
  out.Y[0] = y0;
  if (nmax >= 1) out.Y[1] = y1;
  for (int m = 1; m < nmax; ++m) {
    const double next_y = (2.0 * m / z) * out.Y[size_t(m)] - out.Y[size_t(m) - 1];
    if (std::abs(next_y) > kOverflowGuard) {
      out.valid_orders = m + 1;
      for (int j = m + 1; j <= nmax; ++j)
        out.Y[size_t(j)] = -std::numeric_limits<double>::infinity();
      break;
    }
    out.Y[size_t(m) + 1] = next_y;
  }

  // Derivatives from the standard ladder relations.
  out.dJ[0] = -out.J[1];
  out.dY[0] = -out.Y[1];
  for (int m = 1; m <= nmax; ++m) {
    out.dJ[size_t(m)] = out.J[size_t(m) - 1] - (double(m) / z) * out.J[size_t(m)];
    if (m < out.valid_orders)
      out.dY[size_t(m)] = out.Y[size_t(m) - 1] - (double(m) / z) * out.Y[size_t(m)];
    else
      out.dY[size_t(m)] = -std::numeric_limits<double>::infinity();
  }
  return out;
}

Pair bessel_pair(int n, double z) {
  if (n < 0 || n > 2000)
    throw std::domain_error("bessel_pair: order outside [0, 2000]");
  if (!(z >= 1e-8 && z <= 1e4))
    throw std::domain_error("bessel_pair: argument outside [1e-8, 1e4]");
  const auto arr = jy_arrays(n, z);
  if (n >= arr.valid_orders)
    throw std::range_error("bessel_pair: Y_n(z) overflows double range");
  return {arr.J[size_t(n)], arr.dJ[size_t(n)], arr.Y[size_t(n)], arr.dY[size_t(n)]};
}

double j_log_derivative(int n, double z) {
  if (n < 0 || !(z > 0.0)) throw std::domain_error("j_log_derivative: bad input");
  constexpr double eps = 1e-16;
  constexpr double fpmin = 1e-290;
  const double xi = 1.0 / z;
  const double xi2 = 2.0 * xi;
  double h = n * xi;
  if (std::abs(h) < fpmin) h = fpmin;
  double b = xi2 * n;
  double d = 0.0, c = h;
  const int maxit = 40000 + int(4.0 * z);
  for (int i = 1; i <= maxit; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b - 1.0 / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw std::runtime_error("j_log_derivative: CF1 failed to converge");
}

std::complex<double> dtn_coefficient(int n, double k, double R) {
  const auto p = bessel_pair(std::abs(n), k * R);
  const std::complex<double> h = p.H();
  if (std::abs(h) == 0.0)
    throw std::runtime_error("dtn_coefficient: H1_n(kR) vanished");
  return k * p.dH() / h;
}

}  // namespace helmpml::bessel
