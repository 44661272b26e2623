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

#ifndef UWBNBI_LINK_HPP
#define UWBNBI_LINK_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "uwbnbi/fbmc.hpp"
#include "uwbnbi/iq_capture.hpp"
#include "uwbnbi/propagation.hpp"
#include "uwbnbi/spectrogram.hpp"

namespace uwbnbi {

// Interference taken from a survey grid: every trial draws Gaussian noise whose
// PSD is the grid's linear average over one outage interval, minus the
// equipment noise floor (which is added separately).
struct GridInterference {
    const SpectrogramGrid* grid = nullptr;
};

// Interference taken from a recorded capture at the simulation rate and the
// channel centre; it already contains the receiver noise, so no equipment
// noise is added on top.
struct CaptureInterference {
    const IQCapture* capture = nullptr;
};

// No interference: equipment noise only.
struct NoInterference {};

using InterferenceSource = std::variant<NoInterference, GridInterference, CaptureInterference>;

struct LinkParams {
    FbmcConfig config;
    double distance_m = 5.0;
    PathLossParams path_loss;
    NoiseModel noise;
    Environment multipath = Environment::office_los;
    bool multipath_enabled = true;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    // 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct LinkResult {
    std::size_t trials = 0;
    std::size_t frame_errors = 0;
    std::size_t bit_errors = 0;
    double fer = 0.0;
    double ber = 0.0;
    double distance_m = 0.0;
    Suppression suppression = Suppression::on;
    std::uint64_t seed = 0;
};

// Air time of one coded frame, which is also the outage interval used when
// interference comes from a grid.
double frame_duration_s(const FbmcConfig& cfg);
// Information rate carried by one frame.
double info_rate_bps(const FbmcConfig& cfg);

// Runs params.trials independent frames and decodes each with every requested
// receiver. Trial t uses sub-seeds derived from (seed, t) and, for grid
// interference, outage interval t modulo the number of intervals, so results
// do not depend on thread scheduling.
std::vector<LinkResult> simulate_link(const LinkParams& params, const InterferenceSource& interference,
                                      std::span<const Suppression> modes);
LinkResult simulate_link(const LinkParams& params, const InterferenceSource& interference, Suppression mode);

// Noise with a prescribed PSD (mW/MHz) on the FFT grid of length psd.size();
// psd[i] belongs to frequency offset fftfreq(i) * fs. Returns n samples.
std::vector<cdouble> shaped_noise(std::span<const double> psd_mw_per_mhz, double fs_hz, std::size_t n, Rng& rng);

void to_json(nlohmann::json& j, const LinkResult& r);

// CSV: distance_m,fer_suppressed,fer_unsuppressed.
struct FerPoint {
    double distance_m;
    double fer_suppressed;
    double fer_unsuppressed;
};
void write_fer_csv(std::span<const FerPoint> points, const std::filesystem::path& path);

} // namespace uwbnbi

#endif
