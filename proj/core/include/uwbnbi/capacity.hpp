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

#ifndef UWBNBI_CAPACITY_HPP
#define UWBNBI_CAPACITY_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "uwbnbi/propagation.hpp"
#include "uwbnbi/spectrogram.hpp"

namespace uwbnbi {

// Per-bin signal, noise and interference PSDs (mW/MHz), each bin df_hz wide.
struct SinrProfile {
    std::vector<double> signal;
    std::vector<double> noise;
    std::vector<double> interference;
    double df_hz = 0.0;

    std::size_t size() const { return signal.size(); }
    double bandwidth_hz() const { return static_cast<double>(signal.size()) * df_hz; }
};

void validate(const SinrProfile& p);

// Band-averaged SINR in a single Shannon formula (receiver without
// interference suppression).
double capacity_naive(const SinrProfile& p);
// Sum of per-bin Shannon capacities (receiver with interference suppression).
double capacity_segmented(const SinrProfile& p);

// Profile for the bins of plan's band, interference averaged (linear) over the
// columns whose centre lies in [t_a, t_b).
SinrProfile build_profile(const SpectrogramGrid& grid, double t_a_s, double t_b_s, const ChannelPlan& plan,
                          double d_m, const PathLossParams& plp, const NoiseModel& nm);

struct OutageCurve {
    double rate_bps = 0.0;
    double interval_s = 0.0;
    std::size_t columns_per_interval = 0;
    std::size_t n_intervals = 0;
    std::vector<double> distances_m;
    std::vector<double> pout_suppressed;
    std::vector<double> pout_unsuppressed;
    int channel = 0;
    std::string environment;
};

// Columns per outage interval: round(T / dt), at least one.
std::size_t columns_per_interval(const SpectrogramGrid& grid, double interval_s);

// Splits the grid's time axis into consecutive intervals of interval_s and
// reports Pr(C < R) per distance for both receivers. Needs >= 10 intervals.
// A non-zero max_intervals restricts the evaluation to the leading intervals.
OutageCurve outage_curve(const SpectrogramGrid& grid, const ChannelPlan& plan, const PathLossParams& plp,
                         const NoiseModel& nm, double rate_bps, double interval_s,
                         const std::vector<double>& distances_m, std::size_t max_intervals = 0);

// Rate/interval bundles of the reference experiments.
struct OutagePreset {
    std::string name;
    double rate_bps;
    double interval_s;
    Environment environment;
    int channel;
};
OutagePreset hirate_los_preset();
// Low-rate NLOS bundle at the given rate (31.25, 110 or 250 kbps).
OutagePreset lorate_nlos_preset(double rate_bps = 110e3);
std::vector<double> lorate_rates_bps();

// CSV: leading "# {json metadata}" line, header
// distance_m,pout_suppressed,pout_unsuppressed, one row per distance.
void write_outage_csv(const OutageCurve& curve, const std::filesystem::path& path);

} // namespace uwbnbi

#endif
