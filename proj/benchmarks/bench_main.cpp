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

// Micro benchmarks for the hot paths.

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "uwbnbi/capacity.hpp"
#include "uwbnbi/fbmc.hpp"
#include "uwbnbi/ldpc.hpp"
#include "uwbnbi/spectrogram.hpp"

using namespace uwbnbi;

namespace {

void BM_Spectrogram(benchmark::State& st) {
    const auto nfft = static_cast<std::size_t>(st.range(0));
    IQCapture cap;
    cap.sample_rate_hz = 200e6;
    std::mt19937_64 rng(1);
    std::normal_distribution<float> g;
    cap.samples.resize(nfft * 64);
    for (auto& s : cap.samples) s = {g(rng), g(rng)};
    for (auto _ : st) benchmark::DoNotOptimize(compute_spectrogram(cap, nfft));
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * cap.samples.size()));
}
BENCHMARK(BM_Spectrogram)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_CapacitySegmented(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SinrProfile p;
    p.df_hz = 24414.0625;
    for (std::size_t i = 0; i < n; ++i) {
        p.signal.push_back(1.0);
        p.noise.push_back(0.01);
        p.interference.push_back(u(rng) < 0.3 ? u(rng) : 0.0);
    }
    for (auto _ : st) benchmark::DoNotOptimize(capacity_segmented(p));
}
BENCHMARK(BM_CapacitySegmented)->Arg(20448);

void BM_LdpcDecode(benchmark::State& st) {
    const auto code = QcLdpcCode::load();
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<std::uint8_t> info(code.info_bits());
    for (auto& b : info) b = static_cast<std::uint8_t>(rng() & 1u);
    const auto cw = code.encode(info);
    // About 1.5 dB Eb/N0 at rate 1/3.
    const double sigma2 = 1.0 / (2.0 * code.rate() * 1.41);
    std::vector<double> llr(cw.size());
    for (std::size_t i = 0; i < cw.size(); ++i)
        llr[i] = 2.0 * ((cw[i] ? -1.0 : 1.0) + std::sqrt(sigma2) * g(rng)) / sigma2;
    for (auto _ : st) benchmark::DoNotOptimize(code.decode(llr));
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * code.info_bits()));
}
BENCHMARK(BM_LdpcDecode)->Unit(benchmark::kMicrosecond);

void BM_FilterBank(benchmark::State& st) {
    const FbmcConfig cfg;
    const FilterBank bank(cfg);
    std::mt19937_64 rng(4);
    std::vector<std::uint8_t> bits(cfg.coded_bits_per_block());
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
    const auto tx = spread(bits, cfg, bank.spreading_phases());
    for (auto _ : st) {
        const auto x = bank.synthesize(tx);
        benchmark::DoNotOptimize(bank.analyze(x, tx.n_symbols));
    }
}
BENCHMARK(BM_FilterBank)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
