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

#include <cmath>
#include <map>
#include <random>

#include "test_util.hpp"
#include "uwbnbi/error.hpp"
#include "uwbnbi/svchannel.hpp"

using namespace uwbnbi;

namespace {

std::vector<cdouble> random_signal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cdouble> x(n);
    for (auto& v : x) v = {g(rng), g(rng)};
    return x;
}

double energy(const std::vector<cdouble>& x) {
    double e = 0.0;
    for (auto v : x) e += std::norm(v);
    return e;
}

constexpr double kFs = 665.6e6;

} // namespace

TEST_SUITE("svchannel") {

TEST_CASE("office LOS table row") {
    const auto p = load_sv_params(Environment::office_los);
    CHECK(p.mean_clusters == doctest::Approx(5.4));
    CHECK(p.cluster_rate == doctest::Approx(0.016));
    CHECK(p.ray_rate_1 == doctest::Approx(0.19));
    CHECK(p.ray_rate_2 == doctest::Approx(2.97));
    CHECK(p.ray_mix == doctest::Approx(0.0184));
    CHECK(p.cluster_decay_ns == doctest::Approx(14.6));
    CHECK(p.ray_decay_ns == doctest::Approx(6.4));
    CHECK(p.cluster_sigma_db == doctest::Approx(3.0));
    CHECK_THROWS_AS((void)load_sv_params(Environment::outdoor_nlos), ValidationError);
}

TEST_CASE("realizations have unit energy and sorted delays") {
    for (std::uint64_t s = 0; s < 300; ++s) {
        const auto cir = generate_cir(Environment::office_los, s);
        REQUIRE(!cir.taps.empty());
        CHECK(std::abs(cir.energy() - 1.0) < 1e-9);
        CHECK(cir.taps.front().delay_s >= 0.0);
        for (std::size_t i = 1; i < cir.taps.size(); ++i) REQUIRE(cir.taps[i].delay_s >= cir.taps[i - 1].delay_s);
        CHECK(cir.seed == s);
    }
}

TEST_CASE("same seed, same channel") {
    const auto a = generate_cir(Environment::office_los, 1234);
    const auto b = generate_cir(Environment::office_los, 1234);
    REQUIRE(a.taps.size() == b.taps.size());
    for (std::size_t i = 0; i < a.taps.size(); ++i) {
        CHECK(a.taps[i].delay_s == b.taps[i].delay_s);
        CHECK(a.taps[i].gain == b.taps[i].gain);
    }
    const auto c = generate_cir(Environment::office_los, 1235);
    CHECK((c.taps.size() != a.taps.size() || c.taps[0].gain != a.taps[0].gain));
}

TEST_CASE("delay spread ensemble is stable across seed blocks") {
    // Two disjoint blocks of 1000 realizations agree within a few percent.
    double m[2] = {0.0, 0.0};
    for (int blk = 0; blk < 2; ++blk) {
        for (std::uint64_t s = 0; s < 1000; ++s)
            m[blk] += generate_cir(Environment::office_los, 100000 * (blk + 1) + s).rms_delay_spread_s();
        m[blk] /= 1000.0;
    }
    CHECK(std::abs(m[0] - m[1]) / m[0] < 0.05);
    // Within 20% of the tabulated office LOS mean.
    CHECK(std::abs(m[0] - 10.15e-9) / 10.15e-9 < 0.2);
}

TEST_CASE("identity and two-tap channels") {
    const auto x = random_signal(500, 1);
    CirRealization id;
    id.taps = {{0.0, {1.0, 0.0}}};
    const auto y = apply_channel(x, id, kFs);
    REQUIRE(y.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == x[i]);

    const std::size_t k = 7;
    CirRealization two;
    two.taps = {{0.0, {1.0, 0.0}}, {static_cast<double>(k) / kFs, {1.0, 0.0}}};
    const auto z = apply_channel(x, two, kFs);
    REQUIRE(z.size() == x.size() + k);
    for (std::size_t n = 0; n < z.size(); ++n) {
        cdouble e = 0.0;
        if (n < x.size()) e += x[n];
        if (n >= k) e += x[n - k];
        CHECK(std::abs(z[n] - e) < 1e-12);
    }
}

TEST_CASE("taps snap to the nearest sample and merge") {
    CirRealization c;
    c.taps = {{0.2 / kFs, {0.5, 0.0}}, {0.4 / kFs, {0.0, 0.5}}, {2.6 / kFs, {-0.5, 0.0}}};
    const auto s = sample_taps(c, kFs);
    REQUIRE(s.size() == 2);
    CHECK(s[0].delay == 0);
    CHECK(s[0].gain == cdouble(0.5, 0.5));
    CHECK(s[1].delay == 3);
    CHECK(s[1].gain == cdouble(-0.5, 0.0));
}

TEST_CASE("linearity") {
    const auto cir = generate_cir(Environment::office_los, 5);
    const auto x = random_signal(3000, 2);
    const auto y = random_signal(3000, 3);
    const cdouble a(0.5, -1.25), b(-2.0, 0.75);
    std::vector<cdouble> mix(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mix[i] = a * x[i] + b * y[i];
    const auto hx = apply_channel(x, cir, kFs);
    const auto hy = apply_channel(y, cir, kFs);
    const auto hm = apply_channel(mix, cir, kFs);
    for (std::size_t i = 0; i < hm.size(); ++i) REQUIRE(std::abs(hm[i] - (a * hx[i] + b * hy[i])) < 1e-12);
}

TEST_CASE("output energy") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        const auto cir = generate_cir(Environment::office_los, seed);
        const auto taps = sample_taps(cir, kFs);
        double g2 = 0.0;
        for (const auto& t : taps) g2 += std::norm(t.gain);

        // An impulse returns exactly the sampled tap energy.
        std::vector<cdouble> imp(1, 1.0);
        CHECK(energy(apply_channel(imp, cir, kFs)) == doctest::Approx(g2).epsilon(1e-12));

        // Random input: exact against the input autocorrelation, and close to
        // E_in * sum |g|^2 since the cross terms average out.
        const auto x = random_signal(20000, seed);
        const auto y = apply_channel(x, cir, kFs);
        std::map<long, cdouble> acf;
        for (const auto& ti : taps)
            for (const auto& tj : taps) acf[static_cast<long>(tj.delay) - static_cast<long>(ti.delay)] = 0.0;
        const long n_x = static_cast<long>(x.size());
        for (auto& [lag, r] : acf)
            for (long n = std::max(0L, -lag); n < std::min(n_x, n_x - lag); ++n)
                r += x[static_cast<std::size_t>(n + lag)] * std::conj(x[static_cast<std::size_t>(n)]);
        cdouble exact = 0.0;
        for (const auto& ti : taps)
            for (const auto& tj : taps)
                exact += ti.gain * std::conj(tj.gain) * acf[static_cast<long>(tj.delay) - static_cast<long>(ti.delay)];
        CHECK(energy(y) == doctest::Approx(exact.real()).epsilon(1e-9));
        const auto xl = random_signal(200000, seed + 1000);
        const auto yl = apply_channel(xl, cir, kFs);
        CHECK(std::abs(energy(yl) / (energy(xl) * g2) - 1.0) < 0.02);
    }
}

TEST_CASE("CIR export round trip") {
    test::TempDir dir("cir");
    const auto cir = generate_cir(Environment::office_los, 77);
    export_cir(cir, dir.path() / "c.json");
    const auto back = import_cir(dir.path() / "c.json");
    REQUIRE(back.taps.size() == cir.taps.size());
    for (std::size_t i = 0; i < cir.taps.size(); ++i) {
        CHECK(back.taps[i].delay_s == cir.taps[i].delay_s);
        CHECK(back.taps[i].gain == cir.taps[i].gain);
    }
}

}
