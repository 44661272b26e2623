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
#include <cmath>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "fft.hpp"
#include "uwbnbi/error.hpp"
#include "uwbnbi/fbmc.hpp"

namespace uwbnbi {
namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t fft_index(long bin, std::size_t m) {
    const long mm = static_cast<long>(m);
    return static_cast<std::size_t>(((bin % mm) + mm) % mm);
}

} // namespace

void validate(const FbmcConfig& c) {
    if (!is_pow2(c.fft_size) || c.fft_size < 4)
        throw ValidationError("fft_size must be a power of 2 (>= 4), got " + std::to_string(c.fft_size));
    if (c.n_subcarriers == 0 || c.n_subcarriers % 2 != 0 || c.n_subcarriers >= c.fft_size)
        throw ValidationError("n_subcarriers must be even and below fft_size (" + std::to_string(c.fft_size) + ")");
    if (c.n_streams == 0 || c.n_subcarriers % c.n_streams != 0)
        throw ValidationError("n_streams must divide n_subcarriers");
    if (c.symbols_per_block == 0) throw ValidationError("symbols_per_block must be positive");
    if (!(c.sample_rate_hz > 0.0)) throw ValidationError("sample_rate_hz must be positive");
    if (!(c.fec_rate > 0.0 && c.fec_rate <= 1.0)) throw ValidationError("fec_rate must lie in (0, 1]");
    const auto coded = static_cast<std::size_t>(std::llround(static_cast<double>(c.info_bits) / c.fec_rate));
    if (coded != c.coded_bits_per_block())
        throw ValidationError("one block carries " + std::to_string(c.coded_bits_per_block()) +
                              " coded bits but the code produces " + std::to_string(coded));
    if (std::abs(c.coded_rate_bps() - c.target_coded_rate_bps) > 0.01 * c.target_coded_rate_bps)
        throw ValidationError("coded rate " + std::to_string(c.coded_rate_bps()) + " bps is not within 1% of " +
                              std::to_string(c.target_coded_rate_bps) + " bps");
}

void to_json(nlohmann::json& j, const FbmcConfig& c) {
    j = nlohmann::json{
        {"fft_size", c.fft_size},
        {"n_subcarriers", c.n_subcarriers},
        {"n_streams", c.n_streams},
        {"symbols_per_block", c.symbols_per_block},
        {"overlap", c.overlap},
        {"rolloff", c.rolloff},
        {"kaiser_beta", c.kaiser_beta},
        {"sample_rate_hz", c.sample_rate_hz},
        {"channel", c.channel},
        {"info_bits", c.info_bits},
        {"fec_rate", c.fec_rate},
        {"target_coded_rate_bps", c.target_coded_rate_bps},
        {"modulation", "qpsk"},
        {"coded_rate_bps", c.coded_rate_bps()},
        {"spreading_factor", c.spreading_factor()},
        {"subcarrier_spacing_hz", c.subcarrier_spacing_hz()},
    };
}

void from_json(const nlohmann::json& j, FbmcConfig& c) {
    c = FbmcConfig{};
    c.fft_size = j.value("fft_size", c.fft_size);
    c.n_subcarriers = j.value("n_subcarriers", c.n_subcarriers);
    c.n_streams = j.value("n_streams", c.n_streams);
    c.symbols_per_block = j.value("symbols_per_block", c.symbols_per_block);
    c.overlap = j.value("overlap", c.overlap);
    c.rolloff = j.value("rolloff", c.rolloff);
    c.kaiser_beta = j.value("kaiser_beta", c.kaiser_beta);
    c.sample_rate_hz = j.value("sample_rate_hz", c.sample_rate_hz);
    c.channel = j.value("channel", c.channel);
    c.info_bits = j.value("info_bits", c.info_bits);
    c.fec_rate = j.value("fec_rate", c.fec_rate);
    c.target_coded_rate_bps = j.value("target_coded_rate_bps", c.target_coded_rate_bps);
}

std::vector<std::size_t> stream_subcarriers(const FbmcConfig& cfg, std::size_t stream) {
    if (stream >= cfg.n_streams) throw ValidationError("stream index out of range");
    std::vector<std::size_t> out;
    for (std::size_t k = stream; k < cfg.n_subcarriers; k += cfg.n_streams) out.push_back(k);
    return out;
}

FilterBank::FilterBank(const FbmcConfig& cfg)
    : cfg_(cfg), proto_(design_prototype(cfg.samples_per_symbol(), cfg.overlap, cfg.rolloff, cfg.kaiser_beta)) {
    validate(cfg_);
    const auto k = static_cast<double>(cfg_.n_subcarriers);
    phases_.resize(cfg_.n_subcarriers);
    for (std::size_t i = 0; i < cfg_.n_subcarriers; ++i) {
        const double x = static_cast<double>(i);
        phases_[i] = std::polar(1.0, std::numbers::pi * x * x / k);
    }
}

std::size_t FilterBank::output_length(std::size_t n_symbols) const {
    if (n_symbols == 0) return 0;
    return (n_symbols - 1) * cfg_.samples_per_symbol() + proto_.taps.size();
}

std::vector<cdouble> FilterBank::synthesize(const SymbolGrid& symbols) const {
    if (symbols.n_subcarriers != cfg_.n_subcarriers)
        throw ValidationError("symbol grid has " + std::to_string(symbols.n_subcarriers) + " subcarriers, expected " +
                              std::to_string(cfg_.n_subcarriers));
    const std::size_t m = cfg_.fft_size;
    const std::size_t n = cfg_.samples_per_symbol();
    const auto& p = proto_.taps;
    std::vector<cdouble> x(output_length(symbols.n_symbols));
    std::vector<cdouble> u(m);
    for (std::size_t s = 0; s < symbols.n_symbols; ++s) {
        std::fill(u.begin(), u.end(), cdouble{});
        for (std::size_t k = 0; k < cfg_.n_subcarriers; ++k) u[fft_index(cfg_.bin_of(k), m)] = symbols.at(k, s);
        detail::fft_inverse(u);
        cdouble* out = x.data() + s * n;
        for (std::size_t i = 0; i < p.size(); ++i) out[i] += p[i] * u[i % m];
    }
    return x;
}

SymbolGrid FilterBank::analyze(std::span<const cdouble> y, std::size_t n_symbols) const {
    const std::size_t m = cfg_.fft_size;
    const std::size_t n = cfg_.samples_per_symbol();
    const auto& p = proto_.taps;
    SymbolGrid z(cfg_.n_subcarriers, n_symbols);
    std::vector<cdouble> fold(m);
    for (std::size_t s = 0; s < n_symbols; ++s) {
        std::fill(fold.begin(), fold.end(), cdouble{});
        const std::size_t base = s * n;
        const std::size_t avail = base < y.size() ? std::min(p.size(), y.size() - base) : 0;
        for (std::size_t i = 0; i < avail; ++i) fold[i % m] += y[base + i] * p[i];
        detail::fft_forward(fold);
        for (std::size_t k = 0; k < cfg_.n_subcarriers; ++k) z.at(k, s) = fold[fft_index(cfg_.bin_of(k), m)];
    }
    return z;
}

std::vector<cdouble> FilterBank::subcarrier_response(std::span<const std::size_t> delays,
                                                     std::span<const cdouble> gains) const {
    if (delays.size() != gains.size()) throw ValidationError("delay and gain lists differ in length");
    const auto m = static_cast<double>(cfg_.fft_size);
    std::vector<cdouble> h(cfg_.n_subcarriers);
    for (std::size_t l = 0; l < delays.size(); ++l) {
        const double c = composite_at(proto_.taps, static_cast<long>(delays[l]));
        if (c == 0.0) continue;
        for (std::size_t k = 0; k < cfg_.n_subcarriers; ++k) {
            const double ph = -2.0 * std::numbers::pi * static_cast<double>(cfg_.bin_of(k)) *
                              static_cast<double>(delays[l]) / m;
            h[k] += gains[l] * c * std::polar(1.0, ph);
        }
    }
    return h;
}

} // namespace uwbnbi
