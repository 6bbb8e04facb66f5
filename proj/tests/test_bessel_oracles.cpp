// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helmpml/bessel.hpp"
#include "helmpml/rng.hpp"

using namespace helmpml;
using bessel::bessel_pair;

TEST_CASE("known values at small order") {
  // Reference values (Abramowitz-Stegun tables / independent sources).
  CHECK(bessel_pair(0, 1.0).J == doctest::Approx(0.7651976865579666).epsilon(1e-14));
  CHECK(bessel_pair(1, 1.0).J == doctest::Approx(0.4400505857449335).epsilon(1e-14));
  CHECK(bessel_pair(0, 1.0).Y == doctest::Approx(0.08825696421567696).epsilon(1e-13));
  CHECK(bessel_pair(1, 1.0).Y == doctest::Approx(-0.7812128213002887).epsilon(1e-13));
  CHECK(bessel_pair(0, 5.0).J == doctest::Approx(-0.17759677131433830).epsilon(1e-13));
  CHECK(bessel_pair(0, 5.0).Y == doctest::Approx(-0.30851762524903376).epsilon(1e-13));
  CHECK(bessel_pair(2, 10.0).J == doctest::Approx(0.25463031368512062).epsilon(1e-13));
  CHECK(bessel_pair(5, 2.0).J == doctest::Approx(0.007039629755871685).epsilon(1e-12));
}

TEST_CASE("limiting behaviour near zero argument") {
  CHECK(bessel_pair(0, 1e-6).J == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(bessel_pair(0, 1e-6).Y < -8.0);
}

TEST_CASE("Wronskian identity over random orders and arguments") {
  Rng rng(42);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = int(rng.uniform(0.0, 200.0));
    // Stay inside the double range: z not absurdly small relative to n.
    const double zlo = std::max(0.5, n / 3.0);
    const double z = std::exp(rng.uniform(std::log(zlo), std::log(1e4)));
    const auto p = bessel_pair(n, z);
    const double w = p.J * p.dY - p.dJ * p.Y;
    worst = std::max(worst, std::abs(w - 2.0 / (M_PI * z)) * M_PI * z / 2.0);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("three-term recurrence holds through the array") {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const double z = std::exp(rng.uniform(std::log(0.5), std::log(2e3)));
    const int nmax = 60;
    const auto arr = bessel::jy_arrays(nmax, z);
    double scale = 0.0;
    for (int n = 0; n <= nmax; ++n) scale = std::max(scale, std::abs(arr.J[size_t(n)]));
    for (int n = 1; n < nmax; ++n) {
      const double res = arr.J[size_t(n) - 1] + arr.J[size_t(n) + 1] -
                         (2.0 * n / z) * arr.J[size_t(n)];
      const double local =
          std::max({std::abs(arr.J[size_t(n) - 1]), std::abs(arr.J[size_t(n) + 1]),
                    std::abs((2.0 * n / z) * arr.J[size_t(n)]), scale * 1e-6});
      CHECK(std::abs(res) <= 1e-11 * local);
    }
  }
}

TEST_CASE("range checks") {
  CHECK_THROWS_AS(bessel_pair(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_pair(0, 1e-9), std::domain_error);
  CHECK_THROWS_AS(bessel_pair(0, 2e4), std::domain_error);
  CHECK_THROWS_AS(bessel_pair(900, 1e-6 * 900), std::exception);
}

TEST_CASE("dtn coefficient has positive imaginary part") {
  for (double kR : {1.0, 3.0, 10.0, 30.0, 100.0}) {
    const double k = kR;  // R = 1
    const int ntop = int(2.0 * kR);
    for (int n = 0; n <= ntop; n += std::max(1, ntop / 17)) {
      const auto dtn = bessel::dtn_coefficient(n, k, 1.0);
      CHECK(dtn.imag() > 0.0);
    }
  }
}

TEST_CASE("dtn approaches ik in the large-argument limit") {
  for (double kR : {100.0, 300.0, 1000.0}) {
    const auto dtn = bessel::dtn_coefficient(0, kR, 1.0);
    CHECK(std::abs(dtn - std::complex<double>(0.0, kR)) <= 1.0);  // R = 1
  }
}

TEST_CASE("outgoing mode satisfies the DtN relation") {
  // u = H1_n(kr): du/dr = dtn * u at r = R by definition.
  const double k = 7.3, R = 1.4;
  for (int n : {0, 1, 5, 12}) {
    const auto p = bessel_pair(n, k * R);
    const auto dtn = bessel::dtn_coefficient(n, k, R);
    CHECK(std::abs(k * p.dH() - dtn * p.H()) <= 1e-10 * std::abs(k * p.dH()));
  }
}
