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

#include "uwbnbi/propagation.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "uwbnbi/data_files.hpp"
#include "uwbnbi/error.hpp"

namespace uwbnbi {
namespace {

nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

constexpr std::pair<Environment, const char*> kEnvNames[] = {
    {Environment::office_los, "office_los"},
    {Environment::office_nlos, "office_nlos"},
    {Environment::residential_los, "residential_los"},
    {Environment::residential_nlos, "residential_nlos"},
    {Environment::industrial_los, "industrial_los"},
    {Environment::industrial_nlos, "industrial_nlos"},
    {Environment::outdoor_los, "outdoor_los"},
    {Environment::outdoor_nlos, "outdoor_nlos"},
};

} // namespace

void validate(const ChannelPlan& plan) {
    if (!(plan.cf_hz > 0.0)) throw ValidationError("channel " + std::to_string(plan.id) + ": cf_hz must be positive");
    if (!(plan.bw_hz >= kMinUwbBandwidthHz * (1.0 - 1e-12)))
        throw ValidationError("channel " + std::to_string(plan.id) + ": bw_hz " + std::to_string(plan.bw_hz) +
                              " is below the 499.2 MHz UWB minimum");
    if (!(plan.f_lo_hz() > 0.0)) throw ValidationError("channel " + std::to_string(plan.id) + ": band below 0 Hz");
}

std::vector<ChannelPlan> load_channel_plans(const std::optional<std::filesystem::path>& path) {
    const auto file = path ? *path : data_file("channel_plans.json");
    const auto j = load_json(file);
    std::vector<ChannelPlan> plans;
    try {
        for (const auto& c : j.at("channels")) {
            ChannelPlan p{c.at("id").get<int>(), c.at("cf_hz").get<double>(), c.at("bw_hz").get<double>()};
            validate(p);
            plans.push_back(p);
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(file.string() + ": " + e.what());
    }
    return plans;
}

ChannelPlan channel_plan(int id, const std::optional<std::filesystem::path>& path) {
    for (const auto& p : load_channel_plans(path))
        if (p.id == id) return p;
    throw ValidationError("unknown channel " + std::to_string(id));
}

std::string to_string(Environment env) {
    for (const auto& [e, name] : kEnvNames)
        if (e == env) return name;
    return "unknown";
}

Environment environment_from_string(const std::string& s) {
    for (const auto& [e, name] : kEnvNames)
        if (s == name) return e;
    throw ValidationError("unknown environment '" + s + "'");
}

void validate(const PathLossParams& p) {
    if (!(p.d0_m > 0.0)) throw ValidationError("d0_m must be positive");
    if (!(p.n_exp > 0.0)) throw ValidationError("n_exp must be positive");
    if (!(p.f_ref_hz > 0.0)) throw ValidationError("f_ref_hz must be positive");
    if (!(p.shadow_sigma_db >= 0.0)) throw ValidationError("shadow_sigma_db must be non-negative");
    if (!(p.pl0_db <= 0.0)) throw ValidationError("pl0_db is a gain and must be <= 0 dB");
    if (!std::isfinite(p.kappa)) throw ValidationError("kappa must be finite");
}

PathLossParams load_path_loss(Environment env, const std::optional<std::filesystem::path>& path) {
    const auto file = path ? *path : data_file("path_loss.json");
    const auto j = load_json(file);
    const auto name = to_string(env);
    PathLossParams p;
    p.environment = env;
    try {
        const auto& envs = j.at("environments");
        if (!envs.contains(name)) throw ValidationError(file.string() + ": no parameters for " + name);
        const auto& e = envs.at(name);
        p.pl0_db = e.at("pl0_db").get<double>();
        p.d0_m = e.value("d0_m", 1.0);
        p.n_exp = e.at("n_exp").get<double>();
        p.kappa = e.at("kappa").get<double>();
        p.f_ref_hz = j.value("reference_frequency_hz", 5e9);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(file.string() + ": " + e.what());
    }
    validate(p);
    return p;
}

double path_gain_db(double d_m, double f_hz, const PathLossParams& p) {
    if (!(d_m >= p.d0_m))
        throw ValidationError("distance " + std::to_string(d_m) + " m is below d0 = " + std::to_string(p.d0_m) + " m");
    if (!(f_hz > 0.0)) throw ValidationError("frequency must be positive");
    return p.pl0_db - 10.0 * p.n_exp * std::log10(d_m / p.d0_m) - 20.0 * (p.kappa + 1.0) * std::log10(f_hz / p.f_ref_hz);
}

double path_gain_db(double d_m, double f_hz, const PathLossParams& p, Rng& rng) {
    const double g = path_gain_db(d_m, f_hz, p);
    if (p.shadow_sigma_db <= 0.0) return g;
    std::normal_distribution<double> shadow(0.0, p.shadow_sigma_db);
    return g + shadow(rng);
}

double rx_psd_dbm_mhz(double d_m, double f_hz, const PathLossParams& p) {
    return kMaskDbmPerMhz + path_gain_db(d_m, f_hz, p);
}

void validate(const NoiseModel& nm) {
    if (!std::isfinite(nm.base_psd_dbm_per_mhz)) throw ValidationError("noise base PSD must be finite");
    auto bands = nm.per_band_offsets;
    for (const auto& b : bands)
        if (!(b.f_hi_hz > b.f_lo_hz) || !std::isfinite(b.offset_db))
            throw ValidationError("noise offset band needs f_lo < f_hi and a finite offset");
    std::sort(bands.begin(), bands.end(), [](const auto& a, const auto& b) { return a.f_lo_hz < b.f_lo_hz; });
    for (std::size_t i = 1; i < bands.size(); ++i)
        if (bands[i].f_lo_hz < bands[i - 1].f_hi_hz) throw ValidationError("noise offset bands overlap");
}

double noise_psd_dbm_mhz(double f_hz, const NoiseModel& nm) {
    for (const auto& b : nm.per_band_offsets)
        if (f_hz >= b.f_lo_hz && f_hz < b.f_hi_hz) return nm.base_psd_dbm_per_mhz + b.offset_db;
    return nm.base_psd_dbm_per_mhz;
}

} // namespace uwbnbi
