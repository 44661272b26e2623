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

#ifndef UWBNBI_ENVGEN_HPP
#define UWBNBI_ENVGEN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "uwbnbi/iq_capture.hpp"

namespace uwbnbi {

enum class EmitterKind { tone, ofdm_burst, wideband_carrier };

std::string to_string(EmitterKind k);
EmitterKind emitter_kind_from_string(const std::string& s);

// One synthetic interferer. center_freq_hz is an absolute RF frequency.
//
// Band-limited kinds are Gaussian noise flat at psd_dbm_per_mhz over
// bandwidth_hz. A tone is a pure complex exponential whose power is chosen so
// that the reference spectrogram (4-term Blackman-Harris, 8192 bins at the
// chain rate) reads psd_dbm_per_mhz in the bin that contains it when the tone
// sits on a bin centre.
//
// Bursts alternate exponentially distributed on/off periods. When only
// duty_cycle is given for 0 < duty < 1, a 1 ms mean period is assumed.
struct EmitterSpec {
    EmitterKind kind = EmitterKind::wideband_carrier;
    double center_freq_hz = 0.0;
    double bandwidth_hz = 0.0;
    double psd_dbm_per_mhz = -80.0;
    double duty_cycle = 1.0;
    std::optional<double> mean_on_s;
    std::optional<double> mean_off_s;
};

struct EnvironmentSpec {
    std::vector<EmitterSpec> emitters;
    double noise_psd_dbm_per_mhz = -107.0;
    double duration_s = 1e-3;
    std::uint64_t seed = 1;
    double cal_offset_db = 0.0;
};

// Throws ValidationError naming the offending field / emitter index.
void validate(const EmitterSpec& e, std::size_t index);
void validate(const EnvironmentSpec& spec);

// Mean on and off durations after applying the defaults described above.
struct BurstTiming {
    double mean_on_s;
    double mean_off_s;
};
BurstTiming burst_timing(const EmitterSpec& e);

// Emitter state over [0, duration): sorted, disjoint on-intervals. Depends only
// on the emitter's sub-seed, so every chain of a survey sees the same bursts.
struct Interval {
    double begin_s;
    double end_s;
};
std::vector<Interval> burst_schedule(const EmitterSpec& e, std::size_t index, const EnvironmentSpec& spec);

// Equivalent noise bandwidth in Hz of the reference analysis used for tone
// calibration at the given chain rate.
double reference_enbw_hz(double chain_rate_hz);

// Renders one radio chain of the environment. Emitters entirely outside the
// chain's Nyquist span are ignored; an emitter straddling the span edge is
// rejected. Output is bit-identical for identical arguments.
IQCapture synth_environment(const EnvironmentSpec& spec, double chain_cf_hz, double chain_rate_hz);

void to_json(nlohmann::json& j, const EmitterSpec& e);
void from_json(const nlohmann::json& j, EmitterSpec& e);
void to_json(nlohmann::json& j, const EnvironmentSpec& s);
void from_json(const nlohmann::json& j, EnvironmentSpec& s);

} // namespace uwbnbi

#endif
