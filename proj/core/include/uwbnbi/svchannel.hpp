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

#ifndef UWBNBI_SVCHANNEL_HPP
#define UWBNBI_SVCHANNEL_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uwbnbi/iq_capture.hpp"
#include "uwbnbi/propagation.hpp"

namespace uwbnbi {

// Clustered S-V parameters of the IEEE 802.15.4a channel model. Rates are
// per ns, times in ns, log-normal spreads in dB.
struct SvParams {
    Environment environment = Environment::office_los;
    double mean_clusters = 1.0;     // L-bar, Poisson mean
    double cluster_rate = 0.0;      // Lambda
    double ray_rate_1 = 0.0;        // lambda_1
    double ray_rate_2 = 0.0;        // lambda_2
    double ray_mix = 0.0;           // beta, weight of lambda_1
    double cluster_decay_ns = 0.0;  // Gamma
    double ray_decay_slope = 0.0;   // k_gamma
    double ray_decay_ns = 0.0;      // gamma_0
    double cluster_sigma_db = 0.0;
    double nakagami_m0_db = 0.0;
    double nakagami_m_sigma_db = 0.0;
    double ray_horizon = 10.0;      // rays generated up to horizon * gamma_l
};

SvParams load_sv_params(Environment env, const std::optional<std::filesystem::path>& path = std::nullopt);

struct Tap {
    double delay_s;
    cdouble gain;
};

struct CirRealization {
    std::vector<Tap> taps;
    Environment environment = Environment::office_los;
    std::uint64_t seed = 0;

    double energy() const;
    double rms_delay_spread_s() const;
};

// Unit-energy realization with ascending non-negative delays.
CirRealization generate_cir(Environment env, std::uint64_t seed);
CirRealization generate_cir(const SvParams& params, std::uint64_t seed);

// Convolution with the CIR, each tap placed at the nearest sample of 1/fs.
// Output length = input length + tap span in samples.
std::vector<cdouble> apply_channel(std::span<const cdouble> x, const CirRealization& cir, double fs_hz);

// Taps collapsed onto the 1/fs grid: (sample delay, summed gain).
struct SampledTap {
    std::size_t delay;
    cdouble gain;
};
std::vector<SampledTap> sample_taps(const CirRealization& cir, double fs_hz);

void export_cir(const CirRealization& cir, const std::filesystem::path& path);
CirRealization import_cir(const std::filesystem::path& path);

} // namespace uwbnbi

#endif
