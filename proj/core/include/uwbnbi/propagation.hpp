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

#ifndef UWBNBI_PROPAGATION_HPP
#define UWBNBI_PROPAGATION_HPP

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uwbnbi/random.hpp"

namespace uwbnbi {

// Regulatory mask level for US indoor UWB emissions.
inline constexpr double kMaskDbmPerMhz = -41.3;
// Smallest bandwidth accepted for a channel plan.
inline constexpr double kMinUwbBandwidthHz = 499.2e6;

struct ChannelPlan {
    int id = 0;
    double cf_hz = 0.0;
    double bw_hz = 0.0;

    double f_lo_hz() const { return cf_hz - 0.5 * bw_hz; }
    double f_hi_hz() const { return cf_hz + 0.5 * bw_hz; }
};

void validate(const ChannelPlan& plan);

// Plans from the bundled channel_plans.json unless a path is given.
std::vector<ChannelPlan> load_channel_plans(const std::optional<std::filesystem::path>& path = std::nullopt);
ChannelPlan channel_plan(int id, const std::optional<std::filesystem::path>& path = std::nullopt);

enum class Environment {
    office_los,
    office_nlos,
    residential_los,
    residential_nlos,
    industrial_los,
    industrial_nlos,
    outdoor_los,
    outdoor_nlos,
};

std::string to_string(Environment env);
Environment environment_from_string(const std::string& s);

// Power-law path gain with frequency dependence:
//   G(d, f) = pl0_db - 10 n log10(d/d0) - 20 (kappa + 1) log10(f/f_ref) [+ shadowing]
// pl0_db is the (non-positive) gain at d0 and f_ref.
struct PathLossParams {
    Environment environment = Environment::office_los;
    double pl0_db = 0.0;
    double d0_m = 1.0;
    double n_exp = 2.0;
    double kappa = 0.0;
    double f_ref_hz = 5e9;
    double shadow_sigma_db = 0.0;
};

void validate(const PathLossParams& p);

PathLossParams load_path_loss(Environment env, const std::optional<std::filesystem::path>& path = std::nullopt);

// Deterministic path gain (no shadowing draw). Throws if d < d0.
double path_gain_db(double d_m, double f_hz, const PathLossParams& p);
// With a lognormal shadowing draw from rng when shadow_sigma_db > 0.
double path_gain_db(double d_m, double f_hz, const PathLossParams& p, Rng& rng);

// Received PSD at the mask level plus the path gain.
double rx_psd_dbm_mhz(double d_m, double f_hz, const PathLossParams& p);

struct NoiseBandOffset {
    double f_lo_hz;
    double f_hi_hz;
    double offset_db;
};

// Equipment noise: flat base level plus optional offsets over half-open
// bands [f_lo, f_hi).
struct NoiseModel {
    double base_psd_dbm_per_mhz = -107.0;
    std::vector<NoiseBandOffset> per_band_offsets;
};

void validate(const NoiseModel& nm);
double noise_psd_dbm_mhz(double f_hz, const NoiseModel& nm);

inline double db_to_lin(double db) { return std::pow(10.0, 0.1 * db); }

} // namespace uwbnbi

#endif
