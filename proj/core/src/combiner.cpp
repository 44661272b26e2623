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

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "uwbnbi/error.hpp"
#include "uwbnbi/fbmc.hpp"

namespace uwbnbi {
namespace {

void check_nvar(std::span<const double> nvar) {
    for (std::size_t i = 0; i < nvar.size(); ++i)
        if (!(nvar[i] > 0.0)) throw ValidationError("variance of branch " + std::to_string(i) + " must be positive");
}

} // namespace

std::string to_string(Suppression s) { return s == Suppression::on ? "on" : "off"; }

std::vector<cdouble> qpsk_map(std::span<const std::uint8_t> bits) {
    if (bits.size() % 2 != 0) throw ValidationError("QPSK needs an even number of bits");
    const double a = 1.0 / std::numbers::sqrt2;
    std::vector<cdouble> out(bits.size() / 2);
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = cdouble(bits[2 * j] ? -a : a, bits[2 * j + 1] ? -a : a);
    return out;
}

SymbolGrid spread(std::span<const std::uint8_t> coded_bits, const FbmcConfig& cfg, std::span<const cdouble> phases,
                  std::span<const double> amplitude) {
    const std::size_t per_block = cfg.coded_bits_per_block();
    if (coded_bits.empty() || coded_bits.size() % per_block != 0)
        throw ValidationError(std::to_string(coded_bits.size()) + " coded bits do not fill whole blocks of " +
                              std::to_string(per_block));
    if (phases.size() != cfg.n_subcarriers) throw ValidationError("spreading sequence length mismatch");
    if (!amplitude.empty() && amplitude.size() != cfg.n_subcarriers)
        throw ValidationError("amplitude profile length mismatch");
    const auto sym = qpsk_map(coded_bits);
    const std::size_t L = cfg.n_streams;
    SymbolGrid g(cfg.n_subcarriers, sym.size() / L);
    for (std::size_t j = 0; j < sym.size(); ++j) {
        const std::size_t s = j % L, t = j / L;
        for (std::size_t k = s; k < cfg.n_subcarriers; k += L)
            g.at(k, t) = sym[j] * phases[k] * (amplitude.empty() ? 1.0 : amplitude[k]);
    }
    return g;
}

std::vector<cdouble> modulate(std::span<const std::uint8_t> coded_bits, const FilterBank& bank,
                              std::span<const double> amplitude) {
    return bank.synthesize(spread(coded_bits, bank.config(), bank.spreading_phases(), amplitude));
}

CombineResult mrc_combine(std::span<const cdouble> y, std::span<const cdouble> gains, std::span<const double> nvar) {
    if (y.size() != gains.size() || y.size() != nvar.size()) throw ValidationError("MRC branch count mismatch");
    check_nvar(nvar);
    CombineResult r{{}, 0.0};
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::isinf(nvar[i])) continue;
        r.z += std::conj(gains[i]) * y[i] / nvar[i];
        r.post_snr += std::norm(gains[i]) / nvar[i];
    }
    return r;
}

double post_combining_snr(std::span<const cdouble> h, std::span<const double> signal_power,
                          std::span<const double> nvar) {
    if (h.size() != signal_power.size() || h.size() != nvar.size())
        throw ValidationError("MRC branch count mismatch");
    check_nvar(nvar);
    double snr = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (!std::isinf(nvar[i])) snr += std::norm(h[i]) * signal_power[i] / nvar[i];
    return snr;
}

std::vector<double> combine_llrs(const SymbolGrid& z, std::span<const cdouble> csi, std::span<const double> nvar,
                                 const FbmcConfig& cfg, std::span<const cdouble> phases, Suppression suppression) {
    const std::size_t K = cfg.n_subcarriers, L = cfg.n_streams;
    if (csi.size() != K || nvar.size() != K || phases.size() != K || z.n_subcarriers != K)
        throw ValidationError("csi/nvar/phases must have one entry per active subcarrier (" + std::to_string(K) + ")");
    check_nvar(nvar);

    std::vector<double> var(nvar.begin(), nvar.end());
    if (suppression == Suppression::off) {
        const double mean = std::accumulate(var.begin(), var.end(), 0.0) / static_cast<double>(K);
        std::fill(var.begin(), var.end(), mean);
    }
    std::vector<cdouble> w(K);
    for (std::size_t k = 0; k < K; ++k) w[k] = std::isinf(var[k]) ? cdouble{} : std::conj(csi[k] * phases[k]) / var[k];

    const double scale = 2.0 * std::numbers::sqrt2;
    std::vector<double> llr(2 * z.n_symbols * L);
    for (std::size_t t = 0; t < z.n_symbols; ++t)
        for (std::size_t s = 0; s < L; ++s) {
            cdouble acc{};
            for (std::size_t k = s; k < K; k += L) acc += w[k] * z.at(k, t);
            const std::size_t j = t * L + s;
            llr[2 * j] = scale * acc.real();
            llr[2 * j + 1] = scale * acc.imag();
        }
    return llr;
}

std::vector<double> demod_combine(std::span<const cdouble> y, std::span<const cdouble> csi,
                                  std::span<const double> nvar, const FilterBank& bank, Suppression suppression) {
    const auto& cfg = bank.config();
    const auto z = bank.analyze(y, cfg.symbols_per_block);
    return combine_llrs(z, csi, nvar, cfg, bank.spreading_phases(), suppression);
}

} // namespace uwbnbi
