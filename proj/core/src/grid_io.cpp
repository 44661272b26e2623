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

#include <algorithm>
#include <bit>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "uwbnbi/error.hpp"
#include "uwbnbi/spectrogram.hpp"

static_assert(std::endian::native == std::endian::little, "grid I/O assumes a little-endian host");

namespace uwbnbi {

void write_grid(const SpectrogramGrid& grid, const std::filesystem::path& path) {
    std::vector<double> chain_f_start{grid.f_start_hz()};
    for (auto b : grid.chain_boundaries()) chain_f_start.push_back(grid.bin_freq_hz(b));
    nlohmann::json hdr{
        {"format", "uwbnbi-grid"},
        {"version", 1},
        {"units", "dBm/MHz"},
        {"dtype", "float32-le"},
        {"dt_s", grid.dt_s()},
        {"df_hz", grid.df_hz()},
        {"f_start_hz", grid.f_start_hz()},
        {"t0_s", grid.t0_s()},
        {"n_time", grid.n_time()},
        {"n_freq", grid.n_freq()},
        {"chain_boundaries", grid.chain_boundaries()},
        {"chain_f_start_hz", chain_f_start},
    };
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << hdr.dump() << '\n';
    out.write(reinterpret_cast<const char*>(grid.data().data()),
              static_cast<std::streamsize>(grid.data().size() * sizeof(float)));
    if (!out) throw IoError("write failed: " + path.string());
}

SpectrogramGrid read_grid(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open grid " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("grid " + path.string() + " has no header");

    double dt = 0, df = 0, f0 = 0, t0 = 0;
    std::size_t nt = 0, nf = 0;
    std::vector<std::size_t> bounds;
    std::vector<double> chain_f0;
    try {
        const auto hdr = nlohmann::json::parse(line);
        dt = hdr.at("dt_s").get<double>();
        df = hdr.at("df_hz").get<double>();
        f0 = hdr.at("f_start_hz").get<double>();
        t0 = hdr.at("t0_s").get<double>();
        nt = hdr.at("n_time").get<std::size_t>();
        nf = hdr.at("n_freq").get<std::size_t>();
        bounds = hdr.value("chain_boundaries", std::vector<std::size_t>{});
        chain_f0 = hdr.value("chain_f_start_hz", std::vector<double>{});
    } catch (const nlohmann::json::exception& e) {
        throw IoError("grid " + path.string() + " header: " + e.what());
    }
    if (!(dt > 0.0) || !(df > 0.0)) throw IoError("grid " + path.string() + ": dt_s and df_hz must be positive");

    SpectrogramGrid grid(nt, nf, t0, dt, f0, df);
    if (!bounds.empty()) {
        if (chain_f0.size() != bounds.size() + 1)
            throw IoError("grid " + path.string() + ": chain_f_start_hz must have one entry per chain");
        std::vector<double> axis(nf);
        std::size_t seg = 0;
        std::size_t seg_start = 0;
        for (std::size_t i = 0; i < nf; ++i) {
            if (seg < bounds.size() && i == bounds[seg]) seg_start = bounds[seg++];
            axis[i] = chain_f0[seg] + static_cast<double>(i - seg_start) * df;
        }
        try {
            grid.set_axis(std::move(axis), std::move(bounds));
        } catch (const ValidationError& e) {
            throw IoError("grid " + path.string() + ": " + e.what());
        }
    }

    const auto expected = static_cast<std::streamsize>(nt * nf * sizeof(float));
    std::vector<float> payload(nt * nf);
    in.read(reinterpret_cast<char*>(payload.data()), expected);
    if (in.gcount() != expected)
        throw IoError("grid " + path.string() + ": payload holds " + std::to_string(in.gcount()) +
                      " bytes, expected " + std::to_string(expected));
    for (std::size_t t = 0; t < nt; ++t) std::copy_n(payload.data() + t * nf, nf, grid.row(t).begin());
    return grid;
}

} // namespace uwbnbi
