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

#include "uwbnbi/svchannel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "uwbnbi/data_files.hpp"
#include "uwbnbi/error.hpp"
#include "uwbnbi/random.hpp"

namespace uwbnbi {

SvParams load_sv_params(Environment env, const std::optional<std::filesystem::path>& path) {
    const auto file = path ? *path : data_file("sv_params.json");
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    SvParams p;
    p.environment = env;
    try {
        const auto j = nlohmann::json::parse(in);
        const auto name = to_string(env);
        const auto& envs = j.at("environments");
        if (!envs.contains(name))
            throw ValidationError("no multipath parameters for environment '" + name + "' in " + file.string());
        const auto& e = envs.at(name);
        p.mean_clusters = e.at("mean_clusters").get<double>();
        p.cluster_rate = e.at("cluster_rate").get<double>();
        p.ray_rate_1 = e.at("ray_rate_1").get<double>();
        p.ray_rate_2 = e.at("ray_rate_2").get<double>();
        p.ray_mix = e.at("ray_mix").get<double>();
        p.cluster_decay_ns = e.at("cluster_decay_ns").get<double>();
        p.ray_decay_slope = e.at("ray_decay_slope").get<double>();
        p.ray_decay_ns = e.at("ray_decay_ns").get<double>();
        p.cluster_sigma_db = e.at("cluster_sigma_db").get<double>();
        p.nakagami_m0_db = e.at("nakagami_m0_db").get<double>();
        p.nakagami_m_sigma_db = e.at("nakagami_m_sigma_db").get<double>();
        p.ray_horizon = e.value("ray_horizon", 10.0);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(file.string() + ": " + e.what());
    }
    return p;
}

double CirRealization::energy() const {
    double e = 0.0;
    for (const auto& t : taps) e += std::norm(t.gain);
    return e;
}

double CirRealization::rms_delay_spread_s() const {
    double e = 0.0, m1 = 0.0, m2 = 0.0;
    for (const auto& t : taps) {
        const double p = std::norm(t.gain);
        e += p;
        m1 += p * t.delay_s;
        m2 += p * t.delay_s * t.delay_s;
    }
    if (e <= 0.0) return 0.0;
    m1 /= e;
    m2 /= e;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

CirRealization generate_cir(Environment env, std::uint64_t seed) { return generate_cir(load_sv_params(env), seed); }

CirRealization generate_cir(const SvParams& p, std::uint64_t seed) {
    if (!(p.cluster_rate > 0.0) || !(p.ray_rate_1 > 0.0) || !(p.ray_rate_2 > 0.0) || !(p.ray_decay_ns > 0.0) ||
        !(p.cluster_decay_ns > 0.0) || !(p.mean_clusters > 0.0) || !(p.ray_mix >= 0.0 && p.ray_mix <= 1.0))
        throw ValidationError("invalid multipath parameters for " + to_string(p.environment));

    Rng rng(derive_seed(seed, {0x5356}));
    std::poisson_distribution<int> n_clusters(p.mean_clusters);
    std::exponential_distribution<double> cluster_gap(p.cluster_rate);
    std::exponential_distribution<double> ray_gap_1(p.ray_rate_1);
    std::exponential_distribution<double> ray_gap_2(p.ray_rate_2);
    std::normal_distribution<double> cluster_shadow(0.0, p.cluster_sigma_db);
    std::normal_distribution<double> m_db(p.nakagami_m0_db, p.nakagami_m_sigma_db);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    const int L = std::max(1, n_clusters(rng));
    std::vector<double> cluster_t{0.0};
    for (int l = 1; l < L; ++l) cluster_t.push_back(cluster_t.back() + cluster_gap(rng));

    const double ray_norm = (1.0 - p.ray_mix) * p.ray_rate_1 + p.ray_mix * p.ray_rate_2 + 1.0;
    CirRealization cir;
    cir.environment = p.environment;
    cir.seed = seed;
    for (double tl : cluster_t) {
        const double gamma = p.ray_decay_slope * tl + p.ray_decay_ns;
        const double omega = std::exp(-tl / p.cluster_decay_ns) * std::pow(10.0, 0.1 * cluster_shadow(rng));
        const double scale = omega / (gamma * ray_norm);
        for (double t = 0.0; t < p.ray_horizon * gamma;) {
            const double mean = scale * std::exp(-t / gamma);
            const double m = std::max(0.5, std::pow(10.0, 0.1 * m_db(rng)));
            std::gamma_distribution<double> power(m, mean / m);
            const double a = std::sqrt(power(rng));
            const double phi = 2.0 * std::numbers::pi * u01(rng);
            cir.taps.push_back({(tl + t) * 1e-9, std::polar(a, phi)});
            t += u01(rng) < p.ray_mix ? ray_gap_1(rng) : ray_gap_2(rng);
        }
    }
    std::stable_sort(cir.taps.begin(), cir.taps.end(),
                     [](const Tap& a, const Tap& b) { return a.delay_s < b.delay_s; });
    const double e = cir.energy();
    if (!(e > 0.0)) throw ValidationError("degenerate channel realization");
    const double inv = 1.0 / std::sqrt(e);
    for (auto& t : cir.taps) t.gain *= inv;
    return cir;
}

std::vector<SampledTap> sample_taps(const CirRealization& cir, double fs_hz) {
    if (!(fs_hz > 0.0)) throw ValidationError("sample rate must be positive");
    std::map<std::size_t, cdouble> acc;
    for (const auto& t : cir.taps) {
        if (!(t.delay_s >= 0.0)) throw ValidationError("negative tap delay");
        acc[static_cast<std::size_t>(std::llround(t.delay_s * fs_hz))] += t.gain;
    }
    std::vector<SampledTap> out;
    out.reserve(acc.size());
    for (const auto& [d, g] : acc) out.push_back({d, g});
    return out;
}

std::vector<cdouble> apply_channel(std::span<const cdouble> x, const CirRealization& cir, double fs_hz) {
    const auto taps = sample_taps(cir, fs_hz);
    const std::size_t span = taps.empty() ? 0 : taps.back().delay;
    std::vector<cdouble> y(x.size() + span);
    for (const auto& t : taps)
        for (std::size_t n = 0; n < x.size(); ++n) y[n + t.delay] += t.gain * x[n];
    return y;
}

void export_cir(const CirRealization& cir, const std::filesystem::path& path) {
    nlohmann::json taps = nlohmann::json::array();
    for (const auto& t : cir.taps) taps.push_back({t.delay_s, t.gain.real(), t.gain.imag()});
    nlohmann::json j{{"environment", to_string(cir.environment)}, {"seed", cir.seed}, {"taps", taps}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(1) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

CirRealization import_cir(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    CirRealization cir;
    try {
        const auto j = nlohmann::json::parse(in);
        cir.environment = environment_from_string(j.value("environment", std::string("office_los")));
        cir.seed = j.value("seed", std::uint64_t{0});
        for (const auto& t : j.at("taps"))
            cir.taps.push_back({t.at(0).get<double>(), cdouble(t.at(1).get<double>(), t.at(2).get<double>())});
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    for (std::size_t i = 0; i < cir.taps.size(); ++i) {
        if (!(cir.taps[i].delay_s >= 0.0)) throw IoError(path.string() + ": negative delay");
        if (i > 0 && cir.taps[i].delay_s < cir.taps[i - 1].delay_s)
            throw IoError(path.string() + ": delays not sorted");
    }
    return cir;
}

} // namespace uwbnbi
