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

#ifndef UWBNBI_FBMC_HPP
#define UWBNBI_FBMC_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "uwbnbi/iq_capture.hpp"

namespace uwbnbi {

// Filter bank multicarrier spread-spectrum modem configuration.
//
// The filter bank has fft_size bins spaced sample_rate/fft_size apart; the
// n_subcarriers central bins carry data. Symbols are spaced
// samples_per_symbol() = 2 * fft_size samples, so each subcarrier occupies
// (1 + rolloff)/2 of its bin spacing and neighbours never overlap. Stream s
// owns active subcarriers {s, s + L, s + 2L, ...}.
struct FbmcConfig {
    std::size_t fft_size = 256;
    std::size_t n_subcarriers = 192;
    std::size_t n_streams = 32;
    std::size_t symbols_per_block = 120;
    std::size_t overlap = 6;
    double rolloff = 0.5;
    double kaiser_beta = 6.0;
    double sample_rate_hz = 665.6e6;
    int channel = 2;
    std::size_t info_bits = 2560;
    double fec_rate = 1.0 / 3.0;
    double target_coded_rate_bps = 83.2e6;

    std::size_t samples_per_symbol() const { return 2 * fft_size; }
    std::size_t spreading_factor() const { return n_subcarriers / n_streams; }
    double subcarrier_spacing_hz() const { return sample_rate_hz / static_cast<double>(fft_size); }
    double occupied_bandwidth_hz() const { return static_cast<double>(n_subcarriers) * subcarrier_spacing_hz(); }
    double coded_rate_bps() const {
        return 2.0 * static_cast<double>(n_streams) * sample_rate_hz / static_cast<double>(samples_per_symbol());
    }
    std::size_t coded_bits_per_block() const { return 2 * n_streams * symbols_per_block; }
    // Signed filter-bank bin of active subcarrier k.
    long bin_of(std::size_t k) const {
        return static_cast<long>(k) - static_cast<long>(n_subcarriers / 2);
    }
    double subcarrier_offset_hz(std::size_t k) const {
        return static_cast<double>(bin_of(k)) * subcarrier_spacing_hz();
    }
};

// Structural checks plus coded rate within 1% of the target.
void validate(const FbmcConfig& cfg);

void to_json(nlohmann::json& j, const FbmcConfig& cfg);
void from_json(const nlohmann::json& j, FbmcConfig& cfg);

std::vector<std::size_t> stream_subcarriers(const FbmcConfig& cfg, std::size_t stream);

struct PrototypeFilter {
    std::vector<double> taps;
    double nyquist_residual_db = 0.0;  // max |composite(kN)|, k != 0
    double stopband_db = 0.0;          // worst gain beyond the adjacent-subcarrier edge
};

// Root-Nyquist lowpass of samples_per_symbol * overlap taps for symbols
// spaced samples_per_symbol apart and subcarriers spaced twice the symbol
// rate. Windowed root-raised-cosine start, then a Gauss-Newton projection onto
// the Nyquist constraints with a tapered correction. Unit energy, so the
// composite is 1 at lag 0 and its DC gain over samples_per_symbol is 1.
// Throws ValidationError when either residual misses -50 dB.
PrototypeFilter design_prototype(std::size_t samples_per_symbol, std::size_t overlap, double rolloff,
                                 double kaiser_beta = 6.0);

// Autocorrelation of the prototype at integer lag.
double composite_at(std::span<const double> taps, long lag);

// K x S complex matrix, subcarrier-major.
struct SymbolGrid {
    std::size_t n_subcarriers = 0;
    std::size_t n_symbols = 0;
    std::vector<cdouble> data;

    SymbolGrid() = default;
    SymbolGrid(std::size_t k, std::size_t s) : n_subcarriers(k), n_symbols(s), data(k * s) {}
    cdouble& at(std::size_t k, std::size_t m) { return data[k * n_symbols + m]; }
    cdouble at(std::size_t k, std::size_t m) const { return data[k * n_symbols + m]; }
};

// Polyphase synthesis/analysis pair sharing one prototype.
class FilterBank {
public:
    explicit FilterBank(const FbmcConfig& cfg);

    const FbmcConfig& config() const { return cfg_; }
    const PrototypeFilter& prototype() const { return proto_; }
    // Quadratic-phase spreading sequence, one unit phasor per active subcarrier.
    const std::vector<cdouble>& spreading_phases() const { return phases_; }

    std::size_t output_length(std::size_t n_symbols) const;
    std::vector<cdouble> synthesize(const SymbolGrid& symbols) const;
    // Matched-filter analysis; y shorter than output_length is zero-extended.
    SymbolGrid analyze(std::span<const cdouble> y, std::size_t n_symbols) const;

    // Per-subcarrier response of a sampled multipath channel as seen at the
    // analysis output.
    std::vector<cdouble> subcarrier_response(std::span<const std::size_t> delays,
                                             std::span<const cdouble> gains) const;

private:
    FbmcConfig cfg_;
    PrototypeFilter proto_;
    std::vector<cdouble> phases_;
};

// Gray QPSK, unit energy: bit 0 -> +, bit 1 -> -. (I, Q) = (b[2j], b[2j+1]).
std::vector<cdouble> qpsk_map(std::span<const std::uint8_t> bits);

// Maps coded bits onto the streams and spreads them: symbol j goes to stream
// j mod L at time j / L and is repeated on all of the stream's subcarriers,
// times the spreading phase and the optional per-subcarrier amplitude.
SymbolGrid spread(std::span<const std::uint8_t> coded_bits, const FbmcConfig& cfg,
                  std::span<const cdouble> phases, std::span<const double> amplitude = {});

std::vector<cdouble> modulate(std::span<const std::uint8_t> coded_bits, const FilterBank& bank,
                              std::span<const double> amplitude = {});

struct CombineResult {
    cdouble z;          // sum conj(g_i) y_i / nvar_i
    double post_snr;    // sum |g_i|^2 / nvar_i
};

// Maximum ratio combining of one symbol over a stream's branches.
CombineResult mrc_combine(std::span<const cdouble> y, std::span<const cdouble> gains, std::span<const double> nvar);

// sum |h_i|^2 s_i / nvar_i
double post_combining_snr(std::span<const cdouble> h, std::span<const double> signal_power,
                          std::span<const double> nvar);

enum class Suppression { on, off };
std::string to_string(Suppression s);

// Analysis, per-stream MRC with the given per-subcarrier noise+interference
// variances (replaced by their band mean when suppression is off), QPSK LLRs
// (positive favours bit 0). csi holds the composite gain of each active
// subcarrier, excluding the spreading phase.
std::vector<double> demod_combine(std::span<const cdouble> y, std::span<const cdouble> csi,
                                  std::span<const double> nvar, const FilterBank& bank, Suppression suppression);

// Same, starting from analysis-bank outputs.
std::vector<double> combine_llrs(const SymbolGrid& z, std::span<const cdouble> csi, std::span<const double> nvar,
                                 const FbmcConfig& cfg, std::span<const cdouble> phases, Suppression suppression);

} // namespace uwbnbi

#endif
