// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace helmpml::fft {

/// In-place radix-2 transform; sign = -1 forward, +1 inverse (unscaled).
void transform(std::complex<double>* data, int n, int sign);

/// Row-column 2D transform of an n x n row-major array.
void transform_2d(std::complex<double>* data, int n, int sign);

bool is_power_of_two(int n);

}  // namespace helmpml::fft
