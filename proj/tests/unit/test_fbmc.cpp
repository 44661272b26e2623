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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "test_util.hpp"
#include "uwbnbi/error.hpp"
#include "uwbnbi/fbmc.hpp"
#include "uwbnbi/spectrogram.hpp"

using namespace uwbnbi;
using test::db;

namespace {

std::vector<std::uint8_t> random_bits(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> b(n);
    for (auto& v : b) v = static_cast<std::uint8_t>(rng() & 1u);
    return b;
}

// Symbol EVM of synthesis -> analysis with no channel, in dB.
double loopback_evm_db(const FilterBank& bank, std::uint64_t seed) {
    const auto& cfg = bank.config();
    const auto bits = random_bits(cfg.coded_bits_per_block(), seed);
    const auto tx = spread(bits, cfg, bank.spreading_phases());
    const auto y = bank.synthesize(tx);
    const auto rx = bank.analyze(y, tx.n_symbols);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < tx.data.size(); ++i) {
        err += std::norm(rx.data[i] - tx.data[i]);
        ref += std::norm(tx.data[i]);
    }
    return db(err / ref);
}

FbmcConfig small_config() {
    FbmcConfig c;
    c.fft_size = 64;
    c.n_subcarriers = 48;
    c.n_streams = 8;
    c.symbols_per_block = 480;
    return c;
}

} // namespace

TEST_SUITE("fbmcss") {

TEST_CASE("default configuration hits the reference coded rate") {
    FbmcConfig c;
    CHECK_NOTHROW(validate(c));
    CHECK(c.coded_rate_bps() == doctest::Approx(83.2e6).epsilon(1e-12));
    CHECK(c.occupied_bandwidth_hz() == doctest::Approx(499.2e6).epsilon(1e-12));
    CHECK(c.spreading_factor() == 6);
    CHECK(c.coded_bits_per_block() == 7680);
    CHECK(c.n_subcarriers % c.n_streams == 0);

    auto bad = c;
    bad.n_streams = 7;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = c;
    bad.target_coded_rate_bps = 90e6;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = c;
    bad.symbols_per_block = 100;
    CHECK_THROWS_AS(validate(bad), ValidationError);

    const nlohmann::json j = c;
    CHECK(j.at("coded_rate_bps") == doctest::Approx(83.2e6));
    const auto back = j.get<FbmcConfig>();
    CHECK(back.n_subcarriers == c.n_subcarriers);
    CHECK(back.sample_rate_hz == c.sample_rate_hz);
}

TEST_CASE("streams partition the subcarriers with maximal spacing") {
    FbmcConfig c;
    std::vector<int> owner(c.n_subcarriers, -1);
    for (std::size_t s = 0; s < c.n_streams; ++s) {
        const auto sc = stream_subcarriers(c, s);
        CHECK(sc.size() == c.spreading_factor());
        for (std::size_t i = 0; i < sc.size(); ++i) {
            REQUIRE(owner[sc[i]] == -1);
            owner[sc[i]] = static_cast<int>(s);
            if (i > 0) CHECK(sc[i] - sc[i - 1] == c.n_streams);
        }
    }
    for (std::size_t k = 0; k < c.n_subcarriers; ++k) {
        CHECK(owner[k] >= 0);
        if (k > 0) CHECK(owner[k] != owner[k - 1]);
    }
    CHECK_THROWS_AS((void)stream_subcarriers(c, c.n_streams), ValidationError);
}

TEST_CASE("prototype meets the Nyquist and stopband targets") {
    for (std::size_t n : {128u, 512u}) {
        const auto p = design_prototype(n, 6, 0.5);
        CHECK(p.taps.size() == n * 6);
        CHECK(composite_at(p.taps, 0) == doctest::Approx(1.0).epsilon(1e-12));
        for (long k = 1; k < 6; ++k) CHECK(std::abs(composite_at(p.taps, k * static_cast<long>(n))) < std::pow(10.0, -50.0 / 20.0));
        CHECK(p.nyquist_residual_db < -50.0);
        CHECK(p.stopband_db < -50.0);
        // Symmetric (linear phase) lowpass.
        for (std::size_t i = 0; i < p.taps.size() / 2; ++i)
            REQUIRE(p.taps[i] == doctest::Approx(p.taps[p.taps.size() - 1 - i]).epsilon(1e-9));
    }
}

TEST_CASE("prototype DC gain is normalized") {
    const auto p = design_prototype(512, 6, 0.5);
    const double s = std::accumulate(p.taps.begin(), p.taps.end(), 0.0);
    CHECK(s * s / 512.0 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("prototype preconditions") {
    CHECK_THROWS_AS((void)design_prototype(3, 6, 0.5), ValidationError);
    CHECK_THROWS_AS((void)design_prototype(192, 6, 0.5), ValidationError);
    CHECK_THROWS_AS((void)design_prototype(512, 3, 0.5), ValidationError);
    CHECK_THROWS_AS((void)design_prototype(512, 6, 0.0), ValidationError);
    // Too short to reach -50 dB; the message reports what was achieved.
    CHECK_THROWS_WITH_AS((void)design_prototype(512, 4, 0.1), doctest::Contains("stopband"), ValidationError);
}

TEST_CASE("loopback reconstruction") {
    for (const auto& cfg : {FbmcConfig{}, small_config()}) {
        const FilterBank bank(cfg);
        CHECK(loopback_evm_db(bank, 1) < -40.0);
        CHECK(loopback_evm_db(bank, 2) < -40.0);
        CHECK(bank.output_length(cfg.symbols_per_block) ==
              (cfg.symbols_per_block - 1) * cfg.samples_per_symbol() + cfg.samples_per_symbol() * cfg.overlap);
    }
}

TEST_CASE("spreading phases are unit phasors with quadratic phase") {
    const FilterBank bank{FbmcConfig{}};
    const auto& ph = bank.spreading_phases();
    REQUIRE(ph.size() == 192);
    for (auto v : ph) CHECK(std::abs(v) == doctest::Approx(1.0));
    CHECK(std::arg(ph[0]) == doctest::Approx(0.0));
}

TEST_CASE("modulation is deterministic") {
    const FilterBank bank{FbmcConfig{}};
    const std::vector<std::uint8_t> zeros(7680, 0);
    const auto a = modulate(zeros, bank);
    const auto b = modulate(zeros, bank);
    CHECK(a == b);
    const std::vector<std::uint8_t> partial(7000, 0);
    CHECK_THROWS_AS((void)modulate(partial, bank), ValidationError);
}

TEST_CASE("transmit spectrum stays inside the channel") {
    const FbmcConfig cfg;
    const FilterBank bank(cfg);
    IQCapture cap;
    cap.sample_rate_hz = cfg.sample_rate_hz;
    for (std::uint64_t blk = 0; blk < 8; ++blk) {
        const auto y = modulate(random_bits(7680, 10 + blk), bank);
        for (auto v : y) cap.samples.emplace_back(static_cast<float>(0.05 * v.real()), static_cast<float>(0.05 * v.imag()));
    }
    const auto g = compute_spectrogram(cap, 16384);
    const auto mean = test::mean_psd(g);
    double in_band = 0.0;
    int n_in = 0;
    for (std::size_t i = 0; i < g.n_freq(); ++i)
        if (std::abs(g.bin_freq_hz(i)) < 240e6) {
            in_band += mean[i];
            ++n_in;
        }
    in_band /= n_in;
    // Outermost -30 dB points.
    std::size_t lo = g.n_freq(), hi = 0;
    for (std::size_t i = 0; i < g.n_freq(); ++i)
        if (mean[i] >= in_band * 1e-3) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    const double occupied = g.bin_freq_hz(hi) - g.bin_freq_hz(lo) + g.df_hz();
    CHECK(std::abs(occupied / 499.2e6 - 1.0) < 0.05);
    // 50 dB down from the band edge of the first unused neighbour on. The
    // outermost subcarrier sits at -occupied/2 and a neighbour's band starts
    // (1 - (1 + rolloff) / 4) spacings away from it.
    const double edge = 0.5 * cfg.occupied_bandwidth_hz() + (1.0 - 0.25 * (1.0 + cfg.rolloff)) * cfg.subcarrier_spacing_hz();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_freq(); ++i)
        if (std::abs(g.bin_freq_hz(i)) > edge) worst = std::max(worst, mean[i]);
    CHECK(db(worst / in_band) < -50.0);
}

TEST_CASE("QPSK mapping") {
    const std::vector<std::uint8_t> b{0, 0, 1, 0, 0, 1, 1, 1};
    const auto s = qpsk_map(b);
    const double a = 1.0 / std::sqrt(2.0);
    CHECK(s[0] == cdouble(a, a));
    CHECK(s[1] == cdouble(-a, a));
    CHECK(s[2] == cdouble(a, -a));
    CHECK(s[3] == cdouble(-a, -a));
    CHECK_THROWS_AS((void)qpsk_map(std::vector<std::uint8_t>{1}), ValidationError);
}

TEST_CASE("MRC examples") {
    const std::vector<cdouble> h{{1, 0}, {0, 1}, {-1, 0}, {0.6, 0.8}};
    const std::vector<cdouble> y(4, {0.0, 0.0});
    SUBCASE("four equal branches at SNR 0.5") {
        const std::vector<double> nv(4, 2.0);
        CHECK(mrc_combine(y, h, nv).post_snr == doctest::Approx(2.0));
        CHECK(post_combining_snr(h, std::vector<double>(4, 1.0), nv) == doctest::Approx(2.0));
    }
    SUBCASE("an infinitely noisy branch drops out") {
        std::vector<double> nv(4, 2.0);
        nv[1] = INFINITY;
        const std::vector<cdouble> yy{{1, 0}, {1e9, 1e9}, {1, 0}, {1, 0}};
        const auto r = mrc_combine(yy, h, nv);
        CHECK(r.post_snr == doctest::Approx(1.5));
        const std::vector<cdouble> h3{h[0], h[2], h[3]};
        const std::vector<cdouble> y3{yy[0], yy[2], yy[3]};
        const auto r3 = mrc_combine(y3, h3, std::vector<double>(3, 2.0));
        CHECK(std::abs(r.z - r3.z) < 1e-15);
        CHECK(post_combining_snr(h, std::vector<double>(4, 1.0), nv) == doctest::Approx(1.5));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS((void)mrc_combine(y, h, std::vector<double>(3, 1.0)), ValidationError);
        CHECK_THROWS_AS((void)mrc_combine(y, h, std::vector<double>{1.0, 0.0, 1.0, 1.0}), ValidationError);
        CHECK_THROWS_AS((void)post_combining_snr(h, std::vector<double>(4, 1.0), std::vector<double>{1.0, -1.0, 1.0, 1.0}),
                        ValidationError);
    }
}

TEST_CASE("MRC post-combining SNR matches Monte Carlo") {
    std::mt19937_64 rng(606);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 7;
        std::vector<cdouble> h(n);
        std::vector<double> nv(n), sp(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            h[i] = {g(rng), g(rng)};
            nv[i] = std::pow(10.0, 2.0 * u(rng) - 1.0);
        }
        const double theory = post_combining_snr(h, sp, nv);
        // Estimate the combiner output SNR for random QPSK.
        const int m = 20000;
        double gain = 0.0, err = 0.0;
        const auto r0 = mrc_combine(std::vector<cdouble>(n), h, nv);
        gain = r0.post_snr;
        std::vector<cdouble> y(n);
        for (int k = 0; k < m; ++k) {
            const cdouble x((rng() & 1) ? 0.7071067811865476 : -0.7071067811865476,
                            (rng() & 1) ? 0.7071067811865476 : -0.7071067811865476);
            for (std::size_t i = 0; i < n; ++i)
                y[i] = h[i] * x + std::sqrt(nv[i] / 2.0) * cdouble(g(rng), g(rng));
            const auto r = mrc_combine(y, h, nv);
            err += std::norm(r.z - gain * x);
        }
        const double measured = gain * gain / (err / m);
        CHECK(std::abs(measured / theory - 1.0) < 0.05);
    }
}

TEST_CASE("suppression off equals on for flat noise") {
    const FbmcConfig cfg;
    const FilterBank bank(cfg);
    const auto bits = random_bits(7680, 4);
    auto y = modulate(bits, bank);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (auto& v : y) v += 0.02 * cdouble(g(rng), g(rng));
    std::vector<cdouble> csi(cfg.n_subcarriers, {1.0, 0.0});
    std::vector<double> nv(cfg.n_subcarriers, 0.37);
    const auto on = demod_combine(y, csi, nv, bank, Suppression::on);
    const auto off = demod_combine(y, csi, nv, bank, Suppression::off);
    REQUIRE(on.size() == 7680);
    for (std::size_t i = 0; i < on.size(); ++i) REQUIRE(std::abs(on[i] - off[i]) <= 1e-9 * std::max(1.0, std::abs(on[i])));
    // Hard decisions recover the bits at this SNR.
    std::size_t errors = 0;
    for (std::size_t i = 0; i < on.size(); ++i) errors += (on[i] < 0.0) != (bits[i] != 0);
    CHECK(errors == 0);
    CHECK_THROWS_AS((void)demod_combine(y, std::vector<cdouble>(10), nv, bank, Suppression::on), ValidationError);
    nv[3] = 0.0;
    CHECK_THROWS_AS((void)demod_combine(y, csi, nv, bank, Suppression::on), ValidationError);
}

TEST_CASE("suppression down-weights a jammed subcarrier") {
    const FbmcConfig cfg;
    const FilterBank bank(cfg);
    const auto bits = random_bits(7680, 9);
    auto y = modulate(bits, bank);
    // Strong tone on one subcarrier of stream 0.
    const double f = static_cast<double>(cfg.bin_of(64)) / static_cast<double>(cfg.fft_size);
    for (std::size_t n = 0; n < y.size(); ++n) y[n] += 3.0 * std::polar(1.0, 2.0 * std::numbers::pi * f * static_cast<double>(n));
    std::vector<cdouble> csi(cfg.n_subcarriers, {1.0, 0.0});
    std::vector<double> nv(cfg.n_subcarriers, 1e-3);
    nv[64] = 9.0 * 512.0;
    const auto on = demod_combine(y, csi, nv, bank, Suppression::on);
    const auto off = demod_combine(y, csi, nv, bank, Suppression::off);
    std::size_t e_on = 0, e_off = 0;
    for (std::size_t i = 0; i < on.size(); ++i) {
        e_on += (on[i] < 0.0) != (bits[i] != 0);
        e_off += (off[i] < 0.0) != (bits[i] != 0);
    }
    CHECK(e_on == 0);
    CHECK(e_off > 50);
}

TEST_CASE("subcarrier response of a delayed tap") {
    const FbmcConfig cfg;
    const FilterBank bank(cfg);
    const std::vector<std::size_t> d{0};
    const std::vector<cdouble> g{{0.5, -0.5}};
    const auto h = bank.subcarrier_response(d, g);
    for (auto v : h) CHECK(std::abs(v - g[0]) < 1e-12);

    // Short delay: analysis of the delayed waveform matches the prediction.
    const std::vector<std::size_t> d2{0, 3};
    const std::vector<cdouble> g2{{0.8, 0.0}, {0.0, 0.6}};
    const auto bits = random_bits(7680, 21);
    const auto tx = spread(bits, cfg, bank.spreading_phases());
    const auto x = bank.synthesize(tx);
    std::vector<cdouble> y(x.size() + 3);
    for (std::size_t n = 0; n < x.size(); ++n) {
        y[n] += g2[0] * x[n];
        y[n + 3] += g2[1] * x[n];
    }
    const auto z = bank.analyze(y, tx.n_symbols);
    const auto h2 = bank.subcarrier_response(d2, g2);
    double err = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < cfg.n_subcarriers; ++k)
        for (std::size_t s = 0; s < tx.n_symbols; ++s) {
            err += std::norm(z.at(k, s) - h2[k] * tx.at(k, s));
            ref += std::norm(tx.at(k, s));
        }
    CHECK(db(err / ref) < -35.0);
}

}
