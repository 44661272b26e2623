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

#include "uwbnbi/link.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <exception>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "fft.hpp"
#include "uwbnbi/capacity.hpp"
#include "uwbnbi/error.hpp"
#include "uwbnbi/ldpc.hpp"
#include "uwbnbi/random.hpp"
#include "uwbnbi/svchannel.hpp"

namespace uwbnbi {
namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

double fft_freq(std::size_t i, std::size_t n, double fs) {
    const auto k = static_cast<double>(i) - (i >= (n + 1) / 2 ? static_cast<double>(n) : 0.0);
    return k * fs / static_cast<double>(n);
}

// Everything that stays fixed across trials.
struct Setup {
    FbmcConfig cfg;
    FilterBank bank;
    QcLdpcCode code;
    ChannelPlan plan;
    std::optional<SvParams> sv;
    std::vector<double> amplitude;
    std::size_t frame_len = 0;
    std::size_t columns_per_interval = 0;
    std::size_t n_intervals = 0;

    explicit Setup(const LinkParams& p)
        : cfg(p.config), bank(p.config), code(QcLdpcCode::load()), plan(channel_plan(p.config.channel)) {}
};

struct TrialCounts {
    std::vector<std::size_t> frame_errors;
    std::vector<std::size_t> bit_errors;
};

// PSD (mW/MHz) on an nf-point FFT grid: equipment noise plus, for grids,
// the interval-averaged excess of interference over that noise.
std::vector<double> trial_psd(const Setup& s, const LinkParams& p, const InterferenceSource& src, std::size_t nf,
                              std::size_t trial) {
    const double fs = s.cfg.sample_rate_hz;
    std::vector<double> psd(nf);
    std::vector<double> freq(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        freq[i] = s.plan.cf_hz + fft_freq(i, nf, fs);
        psd[i] = db_to_lin(noise_psd_dbm_mhz(freq[i], p.noise));
    }
    if (const auto* g = std::get_if<GridInterference>(&src)) {
        const auto& grid = *g->grid;
        const std::size_t k = trial % s.n_intervals;
        const std::size_t c0 = k * s.columns_per_interval;
        const double half = 0.5 * grid.df_hz();
        std::map<std::size_t, double> cache;
        for (std::size_t i = 0; i < nf; ++i) {
            if (freq[i] < grid.bin_freq_hz(0) - half || freq[i] > grid.bin_freq_hz(grid.n_freq() - 1) + half)
                continue;
            std::size_t b = grid.lower_bin(freq[i]);
            if (b == grid.n_freq() || (b > 0 && freq[i] - grid.bin_freq_hz(b - 1) < grid.bin_freq_hz(b) - freq[i]))
                --b;
            auto it = cache.find(b);
            if (it == cache.end()) {
                double acc = 0.0;
                for (std::size_t c = c0; c < c0 + s.columns_per_interval; ++c)
                    acc += std::pow(10.0, 0.1 * static_cast<double>(grid.at(c, b)));
                it = cache.emplace(b, acc / static_cast<double>(s.columns_per_interval)).first;
            }
            psd[i] += std::max(0.0, it->second - db_to_lin(noise_psd_dbm_mhz(grid.bin_freq_hz(b), p.noise)));
        }
    }
    return psd;
}

void run_trial(const Setup& s, const LinkParams& p, const InterferenceSource& src, std::span<const Suppression> modes,
               std::size_t trial, TrialCounts& counts) {
    const auto& cfg = s.cfg;
    const double fs = cfg.sample_rate_hz;
    Rng rng(derive_seed(p.seed, {trial, 0x7472}));

    std::vector<std::uint8_t> info(s.code.info_bits());
    for (auto& b : info) b = static_cast<std::uint8_t>(rng() >> 63);
    const auto cw = s.code.encode(info);
    const auto x = modulate(cw, s.bank, s.amplitude);

    std::vector<SampledTap> taps{{0, cdouble(1.0, 0.0)}};
    if (s.sv) {
        taps = sample_taps(generate_cir(*s.sv, derive_seed(p.seed, {trial, 0x6369})), fs);
        double e = 0.0;
        for (const auto& t : taps) e += std::norm(t.gain);
        for (auto& t : taps) t.gain /= std::sqrt(e);
    }
    const std::size_t span = taps.back().delay;
    const std::size_t nf = next_pow2(std::max(s.frame_len + span, s.frame_len));

    // Channel by FFT convolution; the analysis only reads the first frame_len samples.
    std::vector<cdouble> xf(nf), hf(nf);
    std::copy(x.begin(), x.end(), xf.begin());
    for (const auto& t : taps) hf[t.delay] += t.gain;
    detail::fft_forward(xf);
    detail::fft_forward(hf);
    for (std::size_t i = 0; i < nf; ++i) xf[i] *= hf[i] / static_cast<double>(nf);
    detail::fft_inverse(xf);
    xf.resize(s.frame_len);

    std::vector<cdouble> w;
    if (const auto* c = std::get_if<CaptureInterference>(&src)) {
        const auto& cap = *c->capture;
        const double amp = std::sqrt(cap.full_scale_mw());
        w.resize(s.frame_len);
        const std::size_t start = (trial * s.frame_len) % cap.samples.size();
        for (std::size_t i = 0; i < s.frame_len; ++i) {
            const auto v = cap.samples[(start + i) % cap.samples.size()];
            w[i] = amp * cdouble(v.real(), v.imag());
        }
    } else {
        const auto psd = trial_psd(s, p, src, nf, trial);
        w = shaped_noise(psd, fs, s.frame_len, rng);
    }

    const auto zs = s.bank.analyze(xf, cfg.symbols_per_block);
    const auto zw = s.bank.analyze(w, cfg.symbols_per_block);
    SymbolGrid z = zs;
    for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] += zw.data[i];

    std::vector<double> nvar(cfg.n_subcarriers, 0.0);
    for (std::size_t k = 0; k < cfg.n_subcarriers; ++k) {
        for (std::size_t t = 0; t < zw.n_symbols; ++t) nvar[k] += std::norm(zw.at(k, t));
        nvar[k] = std::max(nvar[k] / static_cast<double>(zw.n_symbols), 1e-300);
    }
    std::vector<std::size_t> delays;
    std::vector<cdouble> gains;
    for (const auto& t : taps) {
        delays.push_back(t.delay);
        gains.push_back(t.gain);
    }
    auto csi = s.bank.subcarrier_response(delays, gains);
    for (std::size_t k = 0; k < csi.size(); ++k) csi[k] *= s.amplitude[k];

    for (std::size_t m = 0; m < modes.size(); ++m) {
        const auto llr = combine_llrs(z, csi, nvar, cfg, s.bank.spreading_phases(), modes[m]);
        const auto dec = s.code.decode(llr);
        std::size_t errs = 0;
        for (std::size_t i = 0; i < info.size(); ++i) errs += dec.info[i] != info[i];
        counts.bit_errors[m] += errs;
        counts.frame_errors[m] += errs > 0 ? 1 : 0;
    }
}

} // namespace

double frame_duration_s(const FbmcConfig& cfg) {
    return static_cast<double>(cfg.symbols_per_block * cfg.samples_per_symbol()) / cfg.sample_rate_hz;
}

double info_rate_bps(const FbmcConfig& cfg) { return static_cast<double>(cfg.info_bits) / frame_duration_s(cfg); }

std::vector<cdouble> shaped_noise(std::span<const double> psd_mw_per_mhz, double fs_hz, std::size_t n, Rng& rng) {
    const std::size_t nf = psd_mw_per_mhz.size();
    if (n > nf) throw ValidationError("shaped noise longer than its FFT grid");
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    std::vector<cdouble> w(nf);
    const double fs_mhz = fs_hz * 1e-6;
    const double norm = 1.0 / std::sqrt(static_cast<double>(nf));
    for (std::size_t i = 0; i < nf; ++i) {
        if (!(psd_mw_per_mhz[i] >= 0.0)) throw ValidationError("noise PSD must be non-negative");
        const double re = g(rng);
        w[i] = cdouble(re, g(rng)) * std::sqrt(psd_mw_per_mhz[i] * fs_mhz) * norm;
    }
    detail::fft_inverse(w);
    w.resize(n);
    return w;
}

std::vector<LinkResult> simulate_link(const LinkParams& params, const InterferenceSource& interference,
                                      std::span<const Suppression> modes) {
    if (params.trials < 1) throw ValidationError("trials must be at least 1");
    if (modes.empty()) throw ValidationError("no receiver mode requested");
    validate(params.path_loss);
    validate(params.noise);

    Setup s(params);
    validate(s.plan);
    if (s.cfg.occupied_bandwidth_hz() > s.plan.bw_hz * (1.0 + 1e-9))
        throw ValidationError("configuration occupies " + std::to_string(s.cfg.occupied_bandwidth_hz()) +
                              " Hz, wider than channel " + std::to_string(s.plan.id) + " (" +
                              std::to_string(s.plan.bw_hz) + " Hz)");
    if (params.multipath_enabled) s.sv = load_sv_params(params.multipath);
    s.frame_len = s.bank.output_length(s.cfg.symbols_per_block);

    const double df_mhz = s.cfg.subcarrier_spacing_hz() * 1e-6;
    const auto n_sym = static_cast<double>(s.cfg.samples_per_symbol());
    s.amplitude.resize(s.cfg.n_subcarriers);
    for (std::size_t k = 0; k < s.cfg.n_subcarriers; ++k) {
        const double f = s.plan.cf_hz + s.cfg.subcarrier_offset_hz(k);
        s.amplitude[k] = std::sqrt(db_to_lin(rx_psd_dbm_mhz(params.distance_m, f, params.path_loss)) * df_mhz * n_sym);
    }

    if (const auto* g = std::get_if<GridInterference>(&interference)) {
        if (!g->grid) throw ValidationError("null interference grid");
        s.columns_per_interval = columns_per_interval(*g->grid, frame_duration_s(s.cfg));
        s.n_intervals = g->grid->n_time() / s.columns_per_interval;
        if (s.n_intervals == 0) throw ValidationError("interference grid shorter than one frame");
    } else if (const auto* c = std::get_if<CaptureInterference>(&interference)) {
        if (!c->capture || c->capture->samples.empty()) throw ValidationError("empty interference capture");
        if (std::abs(c->capture->sample_rate_hz - s.cfg.sample_rate_hz) > 1e-6 * s.cfg.sample_rate_hz)
            throw ValidationError("interference capture rate " + std::to_string(c->capture->sample_rate_hz) +
                                  " Hz differs from the modem rate " + std::to_string(s.cfg.sample_rate_hz) + " Hz");
    }

    unsigned threads = params.threads ? params.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, params.trials));
    std::vector<TrialCounts> partial(threads, TrialCounts{std::vector<std::size_t>(modes.size(), 0),
                                                          std::vector<std::size_t>(modes.size(), 0)});
    std::vector<std::exception_ptr> failures(threads);
    auto worker = [&](unsigned w) {
        try {
            for (std::size_t t = w; t < params.trials; t += threads) run_trial(s, params, interference, modes, t, partial[w]);
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    std::vector<LinkResult> out(modes.size());
    for (std::size_t m = 0; m < modes.size(); ++m) {
        auto& r = out[m];
        for (const auto& pc : partial) {
            r.frame_errors += pc.frame_errors[m];
            r.bit_errors += pc.bit_errors[m];
        }
        r.trials = params.trials;
        r.fer = static_cast<double>(r.frame_errors) / static_cast<double>(r.trials);
        r.ber = static_cast<double>(r.bit_errors) / static_cast<double>(r.trials * s.code.info_bits());
        r.distance_m = params.distance_m;
        r.suppression = modes[m];
        r.seed = params.seed;
    }
    return out;
}

LinkResult simulate_link(const LinkParams& params, const InterferenceSource& interference, Suppression mode) {
    const Suppression modes[] = {mode};
    return simulate_link(params, interference, modes).front();
}

void to_json(nlohmann::json& j, const LinkResult& r) {
    j = nlohmann::json{
        {"trials", r.trials},
        {"frame_errors", r.frame_errors},
        {"bit_errors", r.bit_errors},
        {"fer", r.fer},
        {"ber", r.ber},
        {"distance_m", r.distance_m},
        {"suppression", to_string(r.suppression)},
        {"seed", r.seed},
    };
}

void write_fer_csv(std::span<const FerPoint> points, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "distance_m,fer_suppressed,fer_unsuppressed\n";
    char line[128];
    for (const auto& p : points) {
        std::snprintf(line, sizeof line, "%.6g,%.10g,%.10g\n", p.distance_m, p.fer_suppressed, p.fer_unsuppressed);
        out << line;
    }
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace uwbnbi
