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

#ifndef UWBNBI_SPECTROGRAM_HPP
#define UWBNBI_SPECTROGRAM_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "uwbnbi/iq_capture.hpp"

namespace uwbnbi {

// Grid entry written for bins with exactly zero power.
inline constexpr float kFloorDbmPerMhz = -300.0f;

// Periodic (DFT-even) 4-term Blackman-Harris window.
std::vector<double> blackman_harris4(std::size_t n);

// Equivalent noise bandwidth of a window, in bins.
double enbw_bins(std::span<const double> w);

// Time x frequency PSD in dBm/MHz, time-major. Bin i of a row is centred at
// bin_freq_hz(i); bins are strictly increasing, uniformly df_hz apart except
// across chain_boundaries (index of the first bin of each joined chain).
class SpectrogramGrid {
public:
    SpectrogramGrid() = default;
    SpectrogramGrid(std::size_t n_time, std::size_t n_freq, double t0_s, double dt_s, double f_start_hz,
                    double df_hz);

    std::size_t n_time() const { return n_time_; }
    std::size_t n_freq() const { return n_freq_; }
    double t0_s() const { return t0_s_; }
    double dt_s() const { return dt_s_; }
    double df_hz() const { return df_hz_; }
    double f_start_hz() const { return bin_freq_.empty() ? f_start_hz_ : bin_freq_.front(); }

    double bin_freq_hz(std::size_t i) const { return bin_freq_[i]; }
    const std::vector<double>& bin_freqs() const { return bin_freq_; }
    const std::vector<std::size_t>& chain_boundaries() const { return chain_boundaries_; }
    // Centre time of column c.
    double column_time_s(std::size_t c) const { return t0_s_ + (static_cast<double>(c) + 0.5) * dt_s_; }
    double duration_s() const { return static_cast<double>(n_time_) * dt_s_; }

    float& at(std::size_t t, std::size_t f) { return psd_[t * n_freq_ + f]; }
    float at(std::size_t t, std::size_t f) const { return psd_[t * n_freq_ + f]; }
    std::span<const float> row(std::size_t t) const { return {psd_.data() + t * n_freq_, n_freq_}; }
    std::span<float> row(std::size_t t) { return {psd_.data() + t * n_freq_, n_freq_}; }
    const std::vector<float>& data() const { return psd_; }

    // Lowest bin index whose centre is >= f, or n_freq().
    std::size_t lower_bin(double f_hz) const;

    // Stitched grids carry an explicit frequency axis; internal use by stitch()
    // and the grid reader.
    void set_axis(std::vector<double> bin_freq_hz, std::vector<std::size_t> chain_boundaries);

private:
    std::size_t n_time_ = 0;
    std::size_t n_freq_ = 0;
    double t0_s_ = 0.0;
    double dt_s_ = 0.0;
    double f_start_hz_ = 0.0;
    double df_hz_ = 0.0;
    std::vector<double> bin_freq_;
    std::vector<std::size_t> chain_boundaries_;
    std::vector<float> psd_;
};

// Non-overlapping segments of nfft samples, 4-term Blackman-Harris window,
// one FFT per column, calibrated to dBm/MHz through cal_offset_db and the
// window power. The trailing partial segment is dropped.
SpectrogramGrid compute_spectrogram(const IQCapture& cap, std::size_t nfft = 8192);

// Keeps the central keep_fraction of every grid (rounded down to an even bin
// count), joins them in ascending frequency and trims the time axes to the
// common span.
SpectrogramGrid stitch(std::span<const SpectrogramGrid> grids, double keep_fraction = 0.8);

// Number of bins stitch() keeps from an n-bin grid.
std::size_t kept_bins(std::size_t n, double keep_fraction);

// Fraction of columns whose mean in-band PSD (linear average) exceeds
// floor_dbm_per_mhz + threshold_db.
double occupancy(const SpectrogramGrid& grid, double f_lo_hz, double f_hi_hz, double threshold_db_above_floor,
                 double floor_dbm_per_mhz);
// Same, with the floor estimated as the median over all bins of the
// time-averaged PSD. Valid while fewer than half the bins carry emitters.
double occupancy(const SpectrogramGrid& grid, double f_lo_hz, double f_hi_hz, double threshold_db_above_floor);
double estimate_floor_dbm_per_mhz(const SpectrogramGrid& grid);

// Grid file: one line of JSON header terminated by '\n', then
// n_time*n_freq float32 little-endian values in time-major order.
void write_grid(const SpectrogramGrid& grid, const std::filesystem::path& path);
SpectrogramGrid read_grid(const std::filesystem::path& path);

} // namespace uwbnbi

#endif
