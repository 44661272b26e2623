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

#include "uwbnbi/capacity.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "uwbnbi/error.hpp"

namespace uwbnbi {
namespace {

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

struct BandBins {
    std::size_t first;
    std::size_t last;  // exclusive
};

BandBins band_of(const SpectrogramGrid& grid, const ChannelPlan& plan) {
    validate(plan);
    if (grid.n_freq() == 0 || grid.n_time() == 0) throw ValidationError("empty grid");
    const double half = 0.5 * grid.df_hz();
    if (plan.f_lo_hz() < grid.bin_freq_hz(0) - half || plan.f_hi_hz() > grid.bin_freq_hz(grid.n_freq() - 1) + half)
        throw ValidationError("channel " + std::to_string(plan.id) + " band [" + std::to_string(plan.f_lo_hz()) +
                              ", " + std::to_string(plan.f_hi_hz()) + "] Hz lies outside the grid span");
    const auto a = grid.lower_bin(plan.f_lo_hz());
    const auto b = grid.lower_bin(plan.f_hi_hz());
    if (b <= a) throw ValidationError("channel band contains no grid bin");
    return {a, b};
}

// Linear-average interference (PSD minus noise, floored at 0) over columns [c0, c1).
void interference_over(const SpectrogramGrid& grid, BandBins band, std::size_t c0, std::size_t c1,
                       const std::vector<double>& noise, std::vector<double>& out) {
    const std::size_t nb = band.last - band.first;
    out.assign(nb, 0.0);
    for (std::size_t c = c0; c < c1; ++c) {
        const auto row = grid.row(c);
        for (std::size_t i = 0; i < nb; ++i) out[i] += std::pow(10.0, 0.1 * static_cast<double>(row[band.first + i]));
    }
    const double inv = 1.0 / static_cast<double>(c1 - c0);
    for (std::size_t i = 0; i < nb; ++i) out[i] = std::max(0.0, out[i] * inv - noise[i]);
}

} // namespace

void validate(const SinrProfile& p) {
    if (p.signal.empty()) throw ValidationError("empty SINR profile");
    if (p.noise.size() != p.signal.size() || p.interference.size() != p.signal.size())
        throw ValidationError("SINR profile vectors differ in length");
    if (!(p.df_hz > 0.0)) throw ValidationError("SINR profile df_hz must be positive");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p.signal[i] >= 0.0) || !std::isfinite(p.signal[i]))
            throw ValidationError("signal PSD of bin " + std::to_string(i) + " must be finite and >= 0");
        if (!(p.noise[i] > 0.0) || !std::isfinite(p.noise[i]))
            throw ValidationError("noise PSD of bin " + std::to_string(i) + " must be finite and > 0");
        if (!(p.interference[i] >= 0.0))
            throw ValidationError("interference PSD of bin " + std::to_string(i) + " must be >= 0");
    }
}

double capacity_naive(const SinrProfile& p) {
    validate(p);
    double s = 0.0, ni = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += p.signal[i];
        ni += p.noise[i] + p.interference[i];
    }
    return p.bandwidth_hz() * log2_1p(s / ni);
}

double capacity_segmented(const SinrProfile& p) {
    validate(p);
    double c = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) c += log2_1p(p.signal[i] / (p.noise[i] + p.interference[i]));
    return p.df_hz * c;
}

SinrProfile build_profile(const SpectrogramGrid& grid, double t_a_s, double t_b_s, const ChannelPlan& plan,
                          double d_m, const PathLossParams& plp, const NoiseModel& nm) {
    const auto band = band_of(grid, plan);
    if (!(t_b_s > t_a_s)) throw ValidationError("empty time window");
    std::size_t c0 = grid.n_time(), c1 = 0;
    for (std::size_t c = 0; c < grid.n_time(); ++c) {
        const double t = grid.column_time_s(c);
        if (t >= t_a_s && t < t_b_s) {
            c0 = std::min(c0, c);
            c1 = c + 1;
        }
    }
    if (c1 <= c0) throw ValidationError("time window contains no grid column");

    SinrProfile p;
    p.df_hz = grid.df_hz();
    for (std::size_t f = band.first; f < band.last; ++f) {
        const double fr = grid.bin_freq_hz(f);
        p.signal.push_back(db_to_lin(rx_psd_dbm_mhz(d_m, fr, plp)));
        p.noise.push_back(db_to_lin(noise_psd_dbm_mhz(fr, nm)));
    }
    interference_over(grid, band, c0, c1, p.noise, p.interference);
    return p;
}

std::size_t columns_per_interval(const SpectrogramGrid& grid, double interval_s) {
    if (!(interval_s > 0.0)) throw ValidationError("interval must be positive");
    if (!(grid.dt_s() > 0.0)) throw ValidationError("grid dt_s must be positive");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(interval_s / grid.dt_s())));
}

OutageCurve outage_curve(const SpectrogramGrid& grid, const ChannelPlan& plan, const PathLossParams& plp,
                         const NoiseModel& nm, double rate_bps, double interval_s,
                         const std::vector<double>& distances_m, std::size_t max_intervals) {
    if (!(rate_bps >= 0.0) || !std::isfinite(rate_bps)) throw ValidationError("rate must be finite and >= 0");
    validate(plp);
    validate(nm);
    const auto band = band_of(grid, plan);
    const std::size_t cpi = columns_per_interval(grid, interval_s);
    std::size_t n_int = grid.n_time() / cpi;
    if (max_intervals > 0) n_int = std::min(n_int, max_intervals);
    if (n_int < 10)
        throw ValidationError("only " + std::to_string(n_int) + " intervals of " + std::to_string(interval_s) +
                              " s fit the grid; at least 10 are needed");

    OutageCurve out;
    out.rate_bps = rate_bps;
    out.interval_s = interval_s;
    out.columns_per_interval = cpi;
    out.n_intervals = n_int;
    out.distances_m = distances_m;
    out.channel = plan.id;
    out.environment = to_string(plp.environment);

    SinrProfile p;
    p.df_hz = grid.df_hz();
    for (std::size_t f = band.first; f < band.last; ++f)
        p.noise.push_back(db_to_lin(noise_psd_dbm_mhz(grid.bin_freq_hz(f), nm)));

    std::vector<std::vector<double>> interf(n_int);
    for (std::size_t k = 0; k < n_int; ++k) interference_over(grid, band, k * cpi, (k + 1) * cpi, p.noise, interf[k]);

    for (double d : distances_m) {
        p.signal.clear();
        for (std::size_t f = band.first; f < band.last; ++f)
            p.signal.push_back(db_to_lin(rx_psd_dbm_mhz(d, grid.bin_freq_hz(f), plp)));
        std::size_t fail_sup = 0, fail_unsup = 0;
        for (std::size_t k = 0; k < n_int; ++k) {
            p.interference = interf[k];
            if (capacity_segmented(p) < rate_bps) ++fail_sup;
            if (capacity_naive(p) < rate_bps) ++fail_unsup;
        }
        out.pout_suppressed.push_back(static_cast<double>(fail_sup) / static_cast<double>(n_int));
        out.pout_unsuppressed.push_back(static_cast<double>(fail_unsup) / static_cast<double>(n_int));
    }
    return out;
}

OutagePreset hirate_los_preset() { return {"hirate-los", 124.75e6, 40.96e-6, Environment::office_los, 2}; }

OutagePreset lorate_nlos_preset(double rate_bps) {
    return {"lorate-nlos", rate_bps, 30e-3, Environment::office_nlos, 3};
}

std::vector<double> lorate_rates_bps() { return {31.25e3, 110e3, 250e3}; }

void write_outage_csv(const OutageCurve& curve, const std::filesystem::path& path) {
    if (curve.pout_suppressed.size() != curve.distances_m.size() ||
        curve.pout_unsuppressed.size() != curve.distances_m.size())
        throw ValidationError("outage curve lists differ in length");
    nlohmann::json meta{
        {"kind", "outage"},
        {"rate_bps", curve.rate_bps},
        {"interval_s", curve.interval_s},
        {"columns_per_interval", curve.columns_per_interval},
        {"n_intervals", curve.n_intervals},
        {"channel", curve.channel},
        {"environment", curve.environment},
    };
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "# " << meta.dump() << '\n' << "distance_m,pout_suppressed,pout_unsuppressed\n";
    char line[128];
    for (std::size_t i = 0; i < curve.distances_m.size(); ++i) {
        std::snprintf(line, sizeof line, "%.6g,%.10g,%.10g\n", curve.distances_m[i], curve.pout_suppressed[i],
                      curve.pout_unsuppressed[i]);
        out << line;
    }
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace uwbnbi
