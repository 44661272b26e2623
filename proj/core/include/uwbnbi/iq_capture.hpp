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

#ifndef UWBNBI_IQ_CAPTURE_HPP
#define UWBNBI_IQ_CAPTURE_HPP

#include <complex>
#include <filesystem>
#include <vector>

namespace uwbnbi {

using cfloat = std::complex<float>;
using cdouble = std::complex<double>;

// Calibrated complex-baseband record. A stream of mean-square 1.0 carries
// cal_offset_db dBm of total power; samples are full-scale (|x| <= 1).
struct IQCapture {
    std::vector<cfloat> samples;
    double sample_rate_hz = 0.0;
    double center_freq_hz = 0.0;
    double cal_offset_db = 0.0;
    double start_time_s = 0.0;

    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
    // Power in mW represented by a mean-square of 1.0.
    double full_scale_mw() const;
};

// Throws ValidationError on a non-positive rate, non-finite or out-of-range samples.
void validate(const IQCapture& cap);

// Raw payload is interleaved I,Q float32 little-endian; metadata goes to the
// JSON sidecar next to it (payload "x.iq" -> sidecar "x.json").
std::filesystem::path sidecar_path(const std::filesystem::path& payload);
void export_iq(const IQCapture& cap, const std::filesystem::path& payload);
IQCapture import_iq(const std::filesystem::path& payload);

} // namespace uwbnbi

#endif
