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
#include <complex>
#include <numbers>
#include <numeric>

#include <nlohmann/json.hpp>

#include "test_util.hpp"
#include "uwbnbi/envgen.hpp"
#include "uwbnbi/error.hpp"
#include "uwbnbi/spectrogram.hpp"

using namespace uwbnbi;
using test::db;
using test::lin;

namespace {

// Gain of the periodic 4-term Blackman-Harris window at a frequency offset of
// `frac` bins, relative to its DC gain. Evaluated by a direct DTFT sum with
// its own copy of the coefficients.
double scalloping_db(std::size_t n, double frac) {
    const double a[4] = {0.35875, 0.48829, 0.14128, 0.01168};
    std::complex<double> acc = 0.0;
    double dc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        const double w = a[0] - a[1] * std::cos(x) + a[2] * std::cos(2 * x) - a[3] * std::cos(3 * x);
        acc += w * std::polar(1.0, 2.0 * std::numbers::pi * frac * static_cast<double>(i) / static_cast<double>(n));
        dc += w;
    }
    return 20.0 * std::log10(std::abs(acc) / dc);
}

EmitterSpec carrier(double cf, double bw, double psd) {
    EmitterSpec e;
    e.kind = EmitterKind::wideband_carrier;
    e.center_freq_hz = cf;
    e.bandwidth_hz = bw;
    e.psd_dbm_per_mhz = psd;
    return e;
}

EmitterSpec tone(double cf, double psd) {
    EmitterSpec e;
    e.kind = EmitterKind::tone;
    e.center_freq_hz = cf;
    e.psd_dbm_per_mhz = psd;
    return e;
}

// Mean PSD (dBm/MHz) over the bins whose centre lies in [lo, hi].
double band_level(const std::vector<double>& mean, const SpectrogramGrid& g, double lo, double hi) {
    double acc = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < g.n_freq(); ++i)
        if (g.bin_freq_hz(i) >= lo && g.bin_freq_hz(i) <= hi) {
            acc += mean[i];
            ++n;
        }
    REQUIRE(n > 0);
    return db(acc / n);
}

constexpr double kCf = 4.0e9;

} // namespace

TEST_SUITE("envgen") {

TEST_CASE("scalloping oracle matches the classic Blackman-Harris figures") {
    // Frozen from an independent numpy evaluation of the same window.
    CHECK(scalloping_db(8192, 0.4) == doctest::Approx(-0.52761).epsilon(1e-4));
    CHECK(scalloping_db(8192, 0.5) == doctest::Approx(-0.82557).epsilon(1e-4));
}

TEST_CASE("noise-only spec reads its floor in every bin") {
    EnvironmentSpec spec;
    spec.noise_psd_dbm_per_mhz = -107.0;
    spec.duration_s = 2000 * 8192 / 20e6;
    spec.seed = 11;
    const auto cap = synth_environment(spec, kCf, 20e6);
    const auto g = compute_spectrogram(cap);
    REQUIRE(g.n_time() == 2000);
    const auto mean = test::mean_psd(g);
    double lo = 1e9, hi = -1e9;
    for (double v : mean) {
        lo = std::min(lo, db(v));
        hi = std::max(hi, db(v));
    }
    CHECK(lo > -107.5);
    CHECK(hi < -106.5);
}

TEST_CASE("tone calibration") {
    EnvironmentSpec spec;
    spec.noise_psd_dbm_per_mhz = -107.0;
    spec.seed = 3;

    SUBCASE("bin-centred tone reads its PSD") {
        // 204.8 MS/s puts 10 MHz exactly on bin 400.
        spec.duration_s = 20 * 8192 / 204.8e6;
        spec.emitters = {tone(kCf + 10e6, -60.0)};
        const auto g = compute_spectrogram(synth_environment(spec, kCf, 204.8e6));
        const auto mean = test::mean_psd(g);
        const auto peak = std::max_element(mean.begin(), mean.end()) - mean.begin();
        CHECK(g.bin_freq_hz(peak) == doctest::Approx(kCf + 10e6));
        CHECK(std::abs(db(mean[peak]) + 60.0) < 0.05);
    }

    SUBCASE("+10 MHz at 200 MS/s is 0.4 bin off centre and shows the window scalloping") {
        spec.duration_s = 20 * 8192 / 200e6;
        spec.emitters = {tone(kCf + 10e6, -60.0)};
        const auto g = compute_spectrogram(synth_environment(spec, kCf, 200e6));
        const auto mean = test::mean_psd(g);
        const auto peak = std::max_element(mean.begin(), mean.end()) - mean.begin();
        CHECK(std::abs(g.bin_freq_hz(peak) - (kCf + 10e6)) == doctest::Approx(0.4 * g.df_hz()));
        const double expect = -60.0 + scalloping_db(8192, 0.4);
        CHECK(std::abs(db(mean[peak]) - expect) < 0.05);
        // Summing the tone's main lobe recovers the calibrated power.
        double band = 0.0;
        for (long k = peak - 4; k <= peak + 4; ++k) band += mean[static_cast<std::size_t>(k)];
        const double enbw_hz = reference_enbw_hz(200e6);
        CHECK(std::abs(db(band / (enbw_hz / g.df_hz())) + 60.0) < 0.1);
    }
}

TEST_CASE("zero duty cycle leaves the noise untouched") {
    EnvironmentSpec spec;
    spec.duration_s = 1e-3;
    spec.seed = 5;
    const auto ref = synth_environment(spec, kCf, 200e6);
    auto e = carrier(kCf + 20e6, 20e6, -60.0);
    e.duty_cycle = 0.0;
    spec.emitters = {e};
    const auto cap = synth_environment(spec, kCf, 200e6);
    CHECK(cap.samples == ref.samples);
}

TEST_CASE("synthesis is deterministic in the seed") {
    EnvironmentSpec spec;
    spec.duration_s = 2e-3;
    spec.seed = 99;
    auto b = carrier(kCf - 30e6, 20e6, -70.0);
    b.kind = EmitterKind::ofdm_burst;
    b.duty_cycle = 0.4;
    b.mean_on_s = 0.2e-3;
    b.mean_off_s = 0.3e-3;
    spec.emitters = {b, tone(kCf + 5e6, -80.0), carrier(kCf + 50e6, 5e6, -75.0)};
    const auto a1 = synth_environment(spec, kCf, 200e6);
    const auto a2 = synth_environment(spec, kCf, 200e6);
    CHECK(a1.samples == a2.samples);
    spec.seed = 100;
    const auto a3 = synth_environment(spec, kCf, 200e6);
    CHECK(a1.samples != a3.samples);
}

TEST_CASE("disjoint emitters keep their own levels") {
    EnvironmentSpec spec;
    spec.duration_s = 100 * 8192 / 200e6;
    spec.seed = 17;
    spec.emitters = {carrier(kCf - 40e6, 20e6, -70.0), carrier(kCf + 30e6, 10e6, -85.0)};
    const auto g = compute_spectrogram(synth_environment(spec, kCf, 200e6));
    const auto mean = test::mean_psd(g);
    CHECK(std::abs(band_level(mean, g, kCf - 48e6, kCf - 32e6) + 70.0) < 0.5);
    CHECK(std::abs(band_level(mean, g, kCf + 26e6, kCf + 34e6) + 85.0) < 0.5);
    // Away from both bands only the floor remains.
    CHECK(std::abs(band_level(mean, g, kCf - 5e6, kCf + 5e6) + 107.0) < 0.5);
}

TEST_CASE("burst occupancy converges to the duty cycle") {
    // 1000 mean burst periods of 1 ms; short columns so bursts span many.
    EnvironmentSpec spec;
    spec.duration_s = 1.0;
    spec.seed = 23;
    auto b = carrier(kCf, 5e6, -80.0);
    b.kind = EmitterKind::ofdm_burst;
    b.duty_cycle = 0.3;
    spec.emitters = {b};
    const auto g = compute_spectrogram(synth_environment(spec, kCf, 20e6), 256);
    const double occ = occupancy(g, kCf - 2e6, kCf + 2e6, 10.0);
    CHECK(std::abs(occ - 0.3) < 0.05);

    const auto sched = burst_schedule(b, 0, spec);
    double on = 0.0;
    for (const auto& iv : sched) on += iv.end_s - iv.begin_s;
    CHECK(std::abs(on / spec.duration_s - 0.3) < 0.05);
    CHECK(sched.size() > 250);
}

TEST_CASE("burst timing defaults") {
    EmitterSpec e;
    e.duty_cycle = 0.3;
    auto t = burst_timing(e);
    CHECK(t.mean_on_s + t.mean_off_s == doctest::Approx(1e-3));
    CHECK(t.mean_on_s == doctest::Approx(0.3e-3));
    e.mean_on_s = 0.1e-3;
    t = burst_timing(e);
    CHECK(t.mean_off_s == doctest::Approx(0.1e-3 * 0.7 / 0.3));
}

TEST_CASE("every chain sees the same burst schedule") {
    EnvironmentSpec spec;
    spec.duration_s = 5e-3;
    auto b = carrier(kCf, 5e6, -80.0);
    b.kind = EmitterKind::ofdm_burst;
    b.duty_cycle = 0.5;
    spec.emitters = {b, b};
    const auto s0 = burst_schedule(b, 0, spec);
    const auto s0b = burst_schedule(b, 0, spec);
    REQUIRE(s0.size() == s0b.size());
    for (std::size_t i = 0; i < s0.size(); ++i) CHECK(s0[i].begin_s == s0b[i].begin_s);
    const auto s1 = burst_schedule(b, 1, spec);
    CHECK((s1.size() != s0.size() || s1.front().end_s != s0.front().end_s));
}

TEST_CASE("emitter placement against the chain span") {
    EnvironmentSpec spec;
    spec.duration_s = 1e-4;
    const auto ref = synth_environment(spec, kCf, 200e6);

    SUBCASE("outside the span is ignored") {
        spec.emitters = {carrier(kCf + 300e6, 20e6, -60.0), tone(kCf - 150e6, -60.0)};
        CHECK(synth_environment(spec, kCf, 200e6).samples == ref.samples);
    }
    SUBCASE("straddling the edge is rejected and names the emitter") {
        spec.emitters = {tone(kCf, -90.0), carrier(kCf + 95e6, 20e6, -60.0)};
        try {
            (void)synth_environment(spec, kCf, 200e6);
            FAIL("straddling emitter accepted");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("emitter 1") != std::string::npos);
        }
    }
}

TEST_CASE("validation") {
    EnvironmentSpec spec;
    spec.duration_s = 0.0;
    CHECK_THROWS_AS(validate(spec), ValidationError);
    spec.duration_s = 1e-3;
    auto e = carrier(kCf, 0.0, -60.0);
    spec.emitters = {e};
    CHECK_THROWS_AS(validate(spec), ValidationError);
    e.bandwidth_hz = 1e6;
    e.duty_cycle = 1.5;
    spec.emitters = {e};
    CHECK_THROWS_AS(validate(spec), ValidationError);
    e.duty_cycle = 0.5;
    e.mean_on_s = 1e-3;
    e.mean_off_s = 3e-3;
    spec.emitters = {e};
    CHECK_THROWS_AS(validate(spec), ValidationError);
    CHECK_THROWS_AS((void)emitter_kind_from_string("radar"), ValidationError);
}

TEST_CASE("over-range synthesis asks for a calibration offset") {
    EnvironmentSpec spec;
    spec.duration_s = 1e-4;
    spec.emitters = {carrier(kCf, 100e6, 0.0)};
    CHECK_THROWS_AS((void)synth_environment(spec, kCf, 200e6), ValidationError);
    spec.cal_offset_db = 40.0;
    CHECK_NOTHROW((void)synth_environment(spec, kCf, 200e6));
}

TEST_CASE("JSON round trip and diagnostics") {
    EnvironmentSpec spec;
    spec.duration_s = 0.01;
    spec.seed = 42;
    spec.noise_psd_dbm_per_mhz = -100.0;
    auto b = carrier(kCf, 5e6, -80.0);
    b.kind = EmitterKind::ofdm_burst;
    b.duty_cycle = 0.25;
    b.mean_on_s = 1e-4;
    spec.emitters = {b, tone(kCf + 1e6, -70.0)};
    const nlohmann::json j = spec;
    const auto back = j.get<EnvironmentSpec>();
    CHECK(nlohmann::json(back) == j);

    auto bad = j;
    bad["emitters"][1]["colour"] = "red";
    try {
        (void)bad.get<EnvironmentSpec>();
        FAIL("unknown field accepted");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("emitters[1]") != std::string::npos);
        CHECK(msg.find("colour") != std::string::npos);
    }
    bad = j;
    bad["emitters"][0].erase("kind");
    CHECK_THROWS_WITH_AS((void)bad.get<EnvironmentSpec>(), doctest::Contains("kind"), ValidationError);
    bad = j;
    bad.erase("duration_s");
    CHECK_THROWS_AS((void)bad.get<EnvironmentSpec>(), ValidationError);
}

}
