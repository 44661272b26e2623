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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "uwbnbi/error.hpp"
#include "uwbnbi/fbmc.hpp"

namespace uwbnbi {
namespace {

constexpr double kTargetDb = -50.0;
constexpr double kCorrectionTaperBeta = 6.0;
constexpr int kProjectionSteps = 30;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> kaiser(std::size_t n, double beta) {
    std::vector<double> w(n);
    const double mid = 0.5 * static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (static_cast<double>(i) - mid) / mid;
        w[i] = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / std::cyl_bessel_i(0.0, beta);
    }
    return w;
}

// Continuous root-raised-cosine pulse, t in symbol periods.
double rrc(double t, double a) {
    constexpr double pi = std::numbers::pi;
    if (std::abs(t) < 1e-12) return 1.0 - a + 4.0 * a / pi;
    if (std::abs(std::abs(4.0 * a * t) - 1.0) < 1e-9)
        return a / std::numbers::sqrt2 *
               ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * a)) + (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * a)));
    return (std::sin(pi * t * (1.0 - a)) + 4.0 * a * t * std::cos(pi * t * (1.0 + a))) /
           (pi * t * (1.0 - (4.0 * a * t) * (4.0 * a * t)));
}

// Solves A x = b in place for a small dense system (partial pivoting).
std::vector<double> solve(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
            std::swap(b[c], b[piv]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < n; ++k) s -= a[c * n + k] * x[k];
        x[c] = s / a[c * n + c];
    }
    return x;
}

// Gauss-Newton steps towards composite(kN) = 0 (k = 1..ov-1) and unit energy,
// with the correction shaped by a Kaiser taper to keep it narrowband.
void project_nyquist(std::vector<double>& p, std::size_t n_sym, std::size_t ov) {
    const std::size_t len = p.size();
    const auto taper = kaiser(len, kCorrectionTaperBeta);
    const std::size_t m = ov;
    std::vector<double> jac(m * len), c(m), jb(m * m);
    for (int it = 0; it < kProjectionSteps; ++it) {
        std::fill(jac.begin(), jac.end(), 0.0);
        for (std::size_t k = 1; k < ov; ++k) {
            const std::size_t s = k * n_sym;
            double acc = 0.0;
            double* row = &jac[(k - 1) * len];
            for (std::size_t i = 0; i + s < len; ++i) {
                acc += p[i] * p[i + s];
                row[i] += p[i + s];
                row[i + s] += p[i];
            }
            c[k - 1] = acc;
        }
        double e = 0.0;
        double* row = &jac[(m - 1) * len];
        for (std::size_t i = 0; i < len; ++i) {
            e += p[i] * p[i];
            row[i] = 2.0 * p[i];
        }
        c[m - 1] = e - 1.0;
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < len; ++i) s += jac[a * len + i] * taper[i] * jac[b * len + i];
                jb[a * m + b] = s;
            }
        const auto lam = solve(jb, c);
        for (std::size_t i = 0; i < len; ++i) {
            double d = 0.0;
            for (std::size_t a = 0; a < m; ++a) d += jac[a * len + i] * lam[a];
            p[i] -= taper[i] * d;
        }
    }
}

double stopband_db(const std::vector<double>& p, std::size_t n_sym, double rolloff) {
    const std::size_t nfft = 64 * p.size();
    std::vector<std::complex<double>> h(nfft);
    std::copy(p.begin(), p.end(), h.begin());
    detail::fft_forward(h);
    const double dc = std::abs(h[0]);
    const double edge = (2.0 - 0.5 * (1.0 + rolloff)) / static_cast<double>(n_sym);
    double worst = 0.0;
    for (std::size_t i = 0; i < nfft; ++i) {
        const double f = std::abs(static_cast<double>(i <= nfft / 2 ? i : nfft - i) / static_cast<double>(nfft));
        if (f >= edge) worst = std::max(worst, std::abs(h[i]) / dc);
    }
    return 20.0 * std::log10(std::max(worst, 1e-300));
}

} // namespace

double composite_at(std::span<const double> taps, long lag) {
    const auto s = static_cast<std::size_t>(std::abs(lag));
    double acc = 0.0;
    for (std::size_t i = 0; i + s < taps.size(); ++i) acc += taps[i] * taps[i + s];
    return acc;
}

PrototypeFilter design_prototype(std::size_t samples_per_symbol, std::size_t overlap, double rolloff,
                                 double kaiser_beta) {
    if (!is_pow2(samples_per_symbol) || samples_per_symbol < 4)
        throw ValidationError("samples per symbol must be a power of 2 (>= 4), got " +
                              std::to_string(samples_per_symbol));
    if (overlap < 4) throw ValidationError("overlap factor must be at least 4, got " + std::to_string(overlap));
    if (!(rolloff > 0.0 && rolloff <= 1.0)) throw ValidationError("rolloff must lie in (0, 1]");
    if (!(kaiser_beta >= 0.0)) throw ValidationError("kaiser_beta must be non-negative");

    const std::size_t len = samples_per_symbol * overlap;
    const auto w = kaiser(len, kaiser_beta);
    std::vector<double> p(len);
    const double mid = 0.5 * static_cast<double>(len - 1);
    double e = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        p[i] = rrc((static_cast<double>(i) - mid) / static_cast<double>(samples_per_symbol), rolloff) * w[i];
        e += p[i] * p[i];
    }
    for (auto& v : p) v /= std::sqrt(e);
    project_nyquist(p, samples_per_symbol, overlap);

    PrototypeFilter out;
    double worst = 0.0;
    for (std::size_t k = 1; k < overlap; ++k)
        worst = std::max(worst, std::abs(composite_at(p, static_cast<long>(k * samples_per_symbol))));
    out.nyquist_residual_db = 20.0 * std::log10(std::max(worst, 1e-300));
    out.stopband_db = stopband_db(p, samples_per_symbol, rolloff);
    out.taps = std::move(p);
    if (out.nyquist_residual_db > kTargetDb || out.stopband_db > kTargetDb)
        throw ValidationError("prototype (N=" + std::to_string(samples_per_symbol) + ", overlap " +
                              std::to_string(overlap) + ", rolloff " + std::to_string(rolloff) +
                              ") infeasible: Nyquist residual " + std::to_string(out.nyquist_residual_db) +
                              " dB, stopband " + std::to_string(out.stopband_db) + " dB, target -50 dB");
    return out;
}

} // namespace uwbnbi
