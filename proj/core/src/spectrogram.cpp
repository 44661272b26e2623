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

#include "uwbnbi/spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "uwbnbi/error.hpp"

namespace uwbnbi {

SpectrogramGrid::SpectrogramGrid(std::size_t n_time, std::size_t n_freq, double t0_s, double dt_s, double f_start_hz,
                                 double df_hz)
    : n_time_(n_time), n_freq_(n_freq), t0_s_(t0_s), dt_s_(dt_s), f_start_hz_(f_start_hz), df_hz_(df_hz),
      bin_freq_(n_freq), psd_(n_time * n_freq, kFloorDbmPerMhz) {
    for (std::size_t i = 0; i < n_freq; ++i) bin_freq_[i] = f_start_hz + static_cast<double>(i) * df_hz;
}

std::size_t SpectrogramGrid::lower_bin(double f_hz) const {
    return static_cast<std::size_t>(std::lower_bound(bin_freq_.begin(), bin_freq_.end(), f_hz) - bin_freq_.begin());
}

void SpectrogramGrid::set_axis(std::vector<double> bin_freq_hz, std::vector<std::size_t> chain_boundaries) {
    if (bin_freq_hz.size() != n_freq_) throw ValidationError("frequency axis length does not match grid");
    for (std::size_t i = 1; i < bin_freq_hz.size(); ++i)
        if (!(bin_freq_hz[i] > bin_freq_hz[i - 1])) throw ValidationError("frequency axis not strictly increasing");
    for (auto b : chain_boundaries)
        if (b == 0 || b >= n_freq_) throw ValidationError("chain boundary out of range");
    bin_freq_ = std::move(bin_freq_hz);
    chain_boundaries_ = std::move(chain_boundaries);
    if (!bin_freq_.empty()) f_start_hz_ = bin_freq_.front();
}

SpectrogramGrid compute_spectrogram(const IQCapture& cap, std::size_t nfft) {
    if (nfft < 2) throw ValidationError("nfft must be at least 2");
    if (!(cap.sample_rate_hz > 0.0)) throw ValidationError("sample_rate_hz must be positive");
    if (cap.samples.size() < nfft)
        throw ValidationError("capture holds " + std::to_string(cap.samples.size()) +
                              " samples, shorter than one segment of " + std::to_string(nfft));

    const std::size_t n_time = cap.samples.size() / nfft;
    const double fs = cap.sample_rate_hz;
    const double df = fs / static_cast<double>(nfft);
    const auto w = blackman_harris4(nfft);
    double sw2 = 0.0;
    for (double v : w) sw2 += v * v;
    // |X_k|^2 -> mW/MHz
    const double scale = cap.full_scale_mw() / (sw2 * fs * 1e-6);

    SpectrogramGrid grid(n_time, nfft, cap.start_time_s, static_cast<double>(nfft) / fs,
                         cap.center_freq_hz - 0.5 * fs, df);
    std::vector<std::complex<double>> buf(nfft);
    const std::size_t half = nfft / 2;
    for (std::size_t t = 0; t < n_time; ++t) {
        const cfloat* seg = cap.samples.data() + t * nfft;
        for (std::size_t i = 0; i < nfft; ++i)
            buf[i] = std::complex<double>(seg[i].real(), seg[i].imag()) * w[i];
        detail::fft_forward(buf);
        auto row = grid.row(t);
        for (std::size_t i = 0; i < nfft; ++i) {
            const double p = std::norm(buf[(i + half) % nfft]) * scale;
            row[i] = p > 0.0 ? static_cast<float>(10.0 * std::log10(p)) : kFloorDbmPerMhz;
        }
    }
    return grid;
}

std::size_t kept_bins(std::size_t n, double keep_fraction) {
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw ValidationError("keep_fraction must be in (0, 1]");
    auto k = static_cast<std::size_t>(std::floor(keep_fraction * static_cast<double>(n) + 1e-9));
    k -= k % 2;
    if (k == 0) throw ValidationError("keep_fraction leaves no bins");
    return k;
}

SpectrogramGrid stitch(std::span<const SpectrogramGrid> grids, double keep_fraction) {
    if (grids.empty()) throw ValidationError("stitch needs at least one grid");
    const double dt = grids[0].dt_s();
    const double df = grids[0].df_hz();
    for (std::size_t g = 0; g < grids.size(); ++g) {
        if (std::abs(grids[g].dt_s() - dt) > 1e-9 * dt)
            throw ValidationError("grid " + std::to_string(g) + " has dt_s " + std::to_string(grids[g].dt_s()) +
                                  ", expected " + std::to_string(dt));
        if (std::abs(grids[g].df_hz() - df) > 1e-9 * df)
            throw ValidationError("grid " + std::to_string(g) + " has df_hz " + std::to_string(grids[g].df_hz()) +
                                  ", expected " + std::to_string(df));
        if (!grids[g].chain_boundaries().empty())
            throw ValidationError("grid " + std::to_string(g) + " is already stitched");
        if (grids[g].n_time() == 0) throw ValidationError("grid " + std::to_string(g) + " is empty");
    }

    std::vector<std::size_t> order(grids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return grids[a].f_start_hz() < grids[b].f_start_hz(); });

    struct Part {
        std::size_t first;
        std::size_t count;
    };
    std::vector<Part> parts;
    std::vector<double> freqs;
    std::vector<std::size_t> boundaries;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const auto& g = grids[order[oi]];
        const std::size_t keep = kept_bins(g.n_freq(), keep_fraction);
        const std::size_t first = (g.n_freq() - keep) / 2;
        if (!freqs.empty()) {
            const double spacing = (g.bin_freq_hz(first) - freqs.back()) / df;
            if (spacing < 1.0 - 1e-6)
                throw ValidationError("kept bands of chains " + std::to_string(order[oi - 1]) + " and " +
                                      std::to_string(order[oi]) + " overlap");
            if (spacing >= 3.0 - 1e-6)
                throw ValidationError("kept bands of chains " + std::to_string(order[oi - 1]) + " and " +
                                      std::to_string(order[oi]) + " leave a gap of " +
                                      std::to_string(spacing - 1.0) + " bins");
            boundaries.push_back(freqs.size());
        }
        for (std::size_t j = 0; j < keep; ++j) freqs.push_back(g.bin_freq_hz(first + j));
        parts.push_back({first, keep});
    }

    // Common time span, aligned to the latest-starting grid.
    double t0 = grids[0].t0_s();
    for (const auto& g : grids) t0 = std::max(t0, g.t0_s());
    std::vector<std::size_t> offset(grids.size());
    long n_time = -1;
    for (std::size_t g = 0; g < grids.size(); ++g) {
        const double shift = (t0 - grids[g].t0_s()) / dt;
        offset[g] = static_cast<std::size_t>(std::llround(shift));
        const long avail = static_cast<long>(grids[g].n_time()) - static_cast<long>(offset[g]);
        n_time = n_time < 0 ? avail : std::min(n_time, avail);
    }
    if (n_time <= 0) throw ValidationError("grids share no common time span");

    SpectrogramGrid out(static_cast<std::size_t>(n_time), freqs.size(), t0, dt, freqs.front(), df);
    out.set_axis(std::move(freqs), std::move(boundaries));
    for (std::size_t t = 0; t < out.n_time(); ++t) {
        auto dst = out.row(t);
        std::size_t pos = 0;
        for (std::size_t oi = 0; oi < order.size(); ++oi) {
            const auto& g = grids[order[oi]];
            const auto src = g.row(t + offset[order[oi]]);
            std::copy_n(src.begin() + static_cast<long>(parts[oi].first), parts[oi].count,
                        dst.begin() + static_cast<long>(pos));
            pos += parts[oi].count;
        }
    }
    return out;
}

namespace {

std::pair<std::size_t, std::size_t> band_bins(const SpectrogramGrid& grid, double f_lo, double f_hi) {
    if (!(f_hi > f_lo)) throw ValidationError("empty band");
    if (grid.n_freq() == 0 || grid.n_time() == 0) throw ValidationError("empty grid");
    const double half = 0.5 * grid.df_hz();
    if (f_lo < grid.bin_freq_hz(0) - half || f_hi > grid.bin_freq_hz(grid.n_freq() - 1) + half)
        throw ValidationError("band outside grid span");
    const auto a = grid.lower_bin(f_lo);
    const auto b = grid.lower_bin(f_hi);
    if (b <= a) throw ValidationError("band contains no bin centre");
    return {a, b};
}

} // namespace

double occupancy(const SpectrogramGrid& grid, double f_lo_hz, double f_hi_hz, double threshold_db_above_floor,
                 double floor_dbm_per_mhz) {
    const auto [a, b] = band_bins(grid, f_lo_hz, f_hi_hz);
    const double limit = std::pow(10.0, 0.1 * (floor_dbm_per_mhz + threshold_db_above_floor));
    std::size_t hits = 0;
    for (std::size_t t = 0; t < grid.n_time(); ++t) {
        const auto row = grid.row(t);
        double acc = 0.0;
        for (std::size_t f = a; f < b; ++f) acc += std::pow(10.0, 0.1 * static_cast<double>(row[f]));
        if (acc / static_cast<double>(b - a) > limit) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(grid.n_time());
}

double estimate_floor_dbm_per_mhz(const SpectrogramGrid& grid) {
    if (grid.n_freq() == 0 || grid.n_time() == 0) throw ValidationError("empty grid");
    std::vector<double> mean(grid.n_freq(), 0.0);
    for (std::size_t t = 0; t < grid.n_time(); ++t) {
        const auto row = grid.row(t);
        for (std::size_t f = 0; f < grid.n_freq(); ++f) mean[f] += std::pow(10.0, 0.1 * static_cast<double>(row[f]));
    }
    auto mid = mean.begin() + static_cast<long>(mean.size() / 2);
    std::nth_element(mean.begin(), mid, mean.end());
    const double m = *mid / static_cast<double>(grid.n_time());
    return m > 0.0 ? 10.0 * std::log10(m) : static_cast<double>(kFloorDbmPerMhz);
}

double occupancy(const SpectrogramGrid& grid, double f_lo_hz, double f_hi_hz, double threshold_db_above_floor) {
    return occupancy(grid, f_lo_hz, f_hi_hz, threshold_db_above_floor, estimate_floor_dbm_per_mhz(grid));
}

} // namespace uwbnbi
