// SPDX-License-Identifier: Apache-2.0
//
// uwbnbi - narrow-band interference laboratory for ultra-wideband links
// Copyright (C) 2026 The uwbnbi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <numbers>
#include <numeric>

#include "uwbnbi/error.hpp"
#include "uwbnbi/spectrogram.hpp"

namespace uwbnbi {

std::vector<double> blackman_harris4(std::size_t n) {
    constexpr double a0 = 0.35875, a1 = 0.48829, a2 = 0.14128, a3 = 0.01168;
    std::vector<double> w(n);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = step * static_cast<double>(i);
        w[i] = a0 - a1 * std::cos(x) + a2 * std::cos(2.0 * x) - a3 * std::cos(3.0 * x);
    }
    return w;
}

double enbw_bins(std::span<const double> w) {
    if (w.empty()) throw ValidationError("empty window");
    const double s1 = std::accumulate(w.begin(), w.end(), 0.0);
    const double s2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    return static_cast<double>(w.size()) * s2 / (s1 * s1);
}

} // namespace uwbnbi
