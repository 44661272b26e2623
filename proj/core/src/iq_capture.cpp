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

#include "uwbnbi/iq_capture.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "uwbnbi/error.hpp"

static_assert(std::endian::native == std::endian::little, "IQ payload I/O assumes a little-endian host");

namespace uwbnbi {

double IQCapture::full_scale_mw() const { return std::pow(10.0, 0.1 * cal_offset_db); }

void validate(const IQCapture& cap) {
    if (!(cap.sample_rate_hz > 0.0) || !std::isfinite(cap.sample_rate_hz))
        throw ValidationError("sample_rate_hz must be positive, got " + std::to_string(cap.sample_rate_hz));
    if (!std::isfinite(cap.center_freq_hz)) throw ValidationError("center_freq_hz must be finite");
    if (!std::isfinite(cap.cal_offset_db)) throw ValidationError("cal_offset_db must be finite");
    if (!std::isfinite(cap.start_time_s)) throw ValidationError("start_time_s must be finite");
    for (std::size_t i = 0; i < cap.samples.size(); ++i) {
        const auto s = cap.samples[i];
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw ValidationError("sample " + std::to_string(i) + " is not finite");
        if (std::norm(s) > 1.0f)
            throw ValidationError("sample " + std::to_string(i) + " exceeds full scale (|x| = " +
                                  std::to_string(std::abs(s)) + ")");
    }
}

std::filesystem::path sidecar_path(const std::filesystem::path& payload) {
    auto p = payload;
    p.replace_extension(".json");
    if (p == payload) p += ".json";
    return p;
}

void export_iq(const IQCapture& cap, const std::filesystem::path& payload) {
    validate(cap);
    {
        std::ofstream out(payload, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + payload.string() + " for writing");
        out.write(reinterpret_cast<const char*>(cap.samples.data()),
                  static_cast<std::streamsize>(cap.samples.size() * sizeof(cfloat)));
        if (!out) throw IoError("write failed: " + payload.string());
    }
    nlohmann::json meta{
        {"sample_rate_hz", cap.sample_rate_hz},
        {"center_freq_hz", cap.center_freq_hz},
        {"cal_offset_db", cap.cal_offset_db},
        {"start_time_s", cap.start_time_s},
        {"sample_count", cap.samples.size()},
    };
    const auto side = sidecar_path(payload);
    std::ofstream out(side, std::ios::trunc);
    if (!out) throw IoError("cannot open " + side.string() + " for writing");
    out << meta.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + side.string());
}

IQCapture import_iq(const std::filesystem::path& payload) {
    const auto side = sidecar_path(payload);
    if (!std::filesystem::exists(side)) throw IoError("missing sidecar " + side.string());
    if (!std::filesystem::exists(payload)) throw IoError("missing payload " + payload.string());

    nlohmann::json meta;
    {
        std::ifstream in(side);
        try {
            meta = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw IoError("sidecar " + side.string() + ": " + e.what());
        }
    }

    IQCapture cap;
    std::size_t count = 0;
    try {
        cap.sample_rate_hz = meta.at("sample_rate_hz").get<double>();
        cap.center_freq_hz = meta.at("center_freq_hz").get<double>();
        cap.cal_offset_db = meta.value("cal_offset_db", 0.0);
        cap.start_time_s = meta.value("start_time_s", 0.0);
        count = meta.at("sample_count").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("sidecar " + side.string() + ": " + e.what());
    }
    if (!(cap.sample_rate_hz > 0.0))
        throw ValidationError("sidecar " + side.string() + ": sample_rate_hz must be positive");

    const auto bytes = std::filesystem::file_size(payload);
    const auto expected = static_cast<std::uintmax_t>(count) * sizeof(cfloat);
    if (bytes != expected)
        throw IoError("payload " + payload.string() + " holds " + std::to_string(bytes) + " bytes, expected " +
                      std::to_string(expected) + " for " + std::to_string(count) + " samples");

    cap.samples.resize(count);
    std::ifstream in(payload, std::ios::binary);
    in.read(reinterpret_cast<char*>(cap.samples.data()), static_cast<std::streamsize>(expected));
    if (!in) throw IoError("read failed: " + payload.string());
    validate(cap);
    return cap;
}

} // namespace uwbnbi
