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

#include "uwbnbi/envgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "fft.hpp"
#include "uwbnbi/error.hpp"
#include "uwbnbi/random.hpp"
#include "uwbnbi/spectrogram.hpp"

namespace uwbnbi {
namespace {

constexpr double kDefaultBurstPeriodS = 1e-3;
constexpr double kRampS = 0.2e-6;
constexpr double kStopbandDb = 80.0;

std::string emitter_tag(std::size_t index) { return "emitter " + std::to_string(index); }

// Kaiser-windowed lowpass, cutoff at half the band, unit passband gain.
std::vector<double> lowpass(double cutoff_hz, double transition_hz, double fs_hz) {
    const double dw = 2.0 * std::numbers::pi * transition_hz / fs_hz;
    auto n = static_cast<std::size_t>(std::ceil((kStopbandDb - 8.0) / (2.285 * dw))) + 1;
    n |= 1;
    const double beta = 0.1102 * (kStopbandDb - 8.7);
    const double fc = cutoff_hz / fs_hz;
    const double mid = 0.5 * static_cast<double>(n - 1);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = static_cast<double>(i) - mid;
        const double sinc = m == 0.0 ? 2.0 * fc : std::sin(2.0 * std::numbers::pi * fc * m) / (std::numbers::pi * m);
        const double r = m / mid;
        h[i] = sinc * std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / std::cyl_bessel_i(0.0, beta);
    }
    return h;
}

// Stationary band-limited complex Gaussian noise of unit in-band density
// (per-sample variance = occupied fraction of fs), shifted by f_off.
std::vector<cdouble> bandpass_noise(std::size_t n, double bw_hz, double f_off_hz, double fs_hz, Rng& rng) {
    const double transition = std::clamp(0.05 * bw_hz, 4.0 * fs_hz / 8192.0, 1e6);
    const auto h = lowpass(0.5 * bw_hz, transition, fs_hz);
    const std::size_t taps = h.size();
    std::size_t nfft = 8192;
    while (nfft < 4 * taps) nfft *= 2;
    const std::size_t step = nfft - (taps - 1);

    std::vector<cdouble> hf(nfft);
    for (std::size_t i = 0; i < taps; ++i) {
        const double ph = 2.0 * std::numbers::pi * f_off_hz * static_cast<double>(i) / fs_hz;
        hf[i] = h[i] * cdouble(std::cos(ph), std::sin(ph));
    }
    detail::fft_forward(hf);

    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    auto draw = [&] {
        const double re = gauss(rng);
        return cdouble(re, gauss(rng));
    };

    std::vector<cdouble> out(n);
    std::vector<cdouble> history(taps - 1);
    for (auto& v : history) v = draw();
    std::vector<cdouble> buf(nfft);
    for (std::size_t pos = 0; pos < n; pos += step) {
        std::copy(history.begin(), history.end(), buf.begin());
        for (std::size_t i = taps - 1; i < nfft; ++i) buf[i] = draw();
        std::copy(buf.end() - static_cast<long>(taps - 1), buf.end(), history.begin());
        detail::fft_forward(buf);
        for (std::size_t i = 0; i < nfft; ++i) buf[i] *= hf[i];
        detail::fft_inverse(buf);
        const std::size_t m = std::min(step, n - pos);
        const double inv = 1.0 / static_cast<double>(nfft);
        for (std::size_t i = 0; i < m; ++i) out[pos + i] = buf[taps - 1 + i] * inv;
    }
    return out;
}

// Raised-cosine edged on/off envelope sampled at fs.
std::vector<double> envelope(const std::vector<Interval>& on, std::size_t n, double fs_hz) {
    std::vector<double> g(n, 0.0);
    const double half = 0.5 * kRampS;
    auto ramp = [&](double t, double edge) {
        // 0 -> 1 across [edge - half, edge + half]
        if (t <= edge - half) return 0.0;
        if (t >= edge + half) return 1.0;
        return 0.5 * (1.0 - std::cos(std::numbers::pi * (t - edge + half) / kRampS));
    };
    for (const auto& iv : on) {
        const auto a = static_cast<std::size_t>(std::max(0.0, std::floor((iv.begin_s - half) * fs_hz)));
        const auto b = std::min(n, static_cast<std::size_t>(std::ceil((iv.end_s + half) * fs_hz)) + 1);
        for (std::size_t i = a; i < b; ++i) {
            const double t = static_cast<double>(i) / fs_hz;
            const double v = ramp(t, iv.begin_s) * (1.0 - ramp(t, iv.end_s));
            g[i] = std::min(1.0, g[i] + v);
        }
    }
    return g;
}

std::uint64_t chain_key(double cf_hz, double fs_hz) {
    return mix64(std::bit_cast<std::uint64_t>(cf_hz)) ^ std::bit_cast<std::uint64_t>(fs_hz);
}

} // namespace

std::string to_string(EmitterKind k) {
    switch (k) {
    case EmitterKind::tone: return "tone";
    case EmitterKind::ofdm_burst: return "ofdm_burst";
    case EmitterKind::wideband_carrier: return "wideband_carrier";
    }
    return "unknown";
}

EmitterKind emitter_kind_from_string(const std::string& s) {
    if (s == "tone") return EmitterKind::tone;
    if (s == "ofdm_burst") return EmitterKind::ofdm_burst;
    if (s == "wideband_carrier") return EmitterKind::wideband_carrier;
    throw ValidationError("unknown emitter kind '" + s + "' (tone, ofdm_burst, wideband_carrier)");
}

void validate(const EmitterSpec& e, std::size_t index) {
    const auto tag = emitter_tag(index);
    if (!std::isfinite(e.center_freq_hz)) throw ValidationError(tag + ": center_freq_hz must be finite");
    if (!std::isfinite(e.psd_dbm_per_mhz)) throw ValidationError(tag + ": psd_dbm_per_mhz must be finite");
    if (e.kind != EmitterKind::tone && !(e.bandwidth_hz > 0.0))
        throw ValidationError(tag + ": bandwidth_hz must be positive for " + to_string(e.kind));
    if (!(e.duty_cycle >= 0.0 && e.duty_cycle <= 1.0))
        throw ValidationError(tag + ": duty_cycle must lie in [0, 1]");
    if (e.mean_on_s && !(*e.mean_on_s > 0.0)) throw ValidationError(tag + ": mean_on_s must be positive");
    if (e.mean_off_s && !(*e.mean_off_s > 0.0)) throw ValidationError(tag + ": mean_off_s must be positive");
    if (e.mean_on_s && e.mean_off_s) {
        const double d = *e.mean_on_s / (*e.mean_on_s + *e.mean_off_s);
        if (std::abs(d - e.duty_cycle) > 1e-9)
            throw ValidationError(tag + ": mean_on_s/(mean_on_s+mean_off_s) = " + std::to_string(d) +
                                  " does not match duty_cycle " + std::to_string(e.duty_cycle));
    }
}

void validate(const EnvironmentSpec& spec) {
    if (!(spec.duration_s > 0.0) || !std::isfinite(spec.duration_s))
        throw ValidationError("duration_s must be positive");
    if (!std::isfinite(spec.noise_psd_dbm_per_mhz)) throw ValidationError("noise_psd_dbm_per_mhz must be finite");
    if (!std::isfinite(spec.cal_offset_db)) throw ValidationError("cal_offset_db must be finite");
    for (std::size_t i = 0; i < spec.emitters.size(); ++i) validate(spec.emitters[i], i);
}

BurstTiming burst_timing(const EmitterSpec& e) {
    const double d = e.duty_cycle;
    if (e.mean_on_s && e.mean_off_s) return {*e.mean_on_s, *e.mean_off_s};
    if (d <= 0.0) return {0.0, INFINITY};
    if (d >= 1.0) return {INFINITY, 0.0};
    if (e.mean_on_s) return {*e.mean_on_s, *e.mean_on_s * (1.0 - d) / d};
    if (e.mean_off_s) return {*e.mean_off_s * d / (1.0 - d), *e.mean_off_s};
    return {d * kDefaultBurstPeriodS, (1.0 - d) * kDefaultBurstPeriodS};
}

std::vector<Interval> burst_schedule(const EmitterSpec& e, std::size_t index, const EnvironmentSpec& spec) {
    validate(e, index);
    const auto timing = burst_timing(e);
    if (e.duty_cycle >= 1.0 || timing.mean_off_s == 0.0) return {{0.0, spec.duration_s}};
    if (e.duty_cycle <= 0.0 || timing.mean_on_s == 0.0) return {};

    Rng rng(derive_seed(spec.seed, {0x42, index}));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::exponential_distribution<double> on_len(1.0 / timing.mean_on_s);
    std::exponential_distribution<double> off_len(1.0 / timing.mean_off_s);

    // Start in the stationary state; exponential residual lifetimes are
    // again exponential with the same mean.
    bool on = u(rng) < timing.mean_on_s / (timing.mean_on_s + timing.mean_off_s);
    std::vector<Interval> out;
    double t = 0.0;
    while (t < spec.duration_s) {
        const double len = on ? on_len(rng) : off_len(rng);
        const double end = std::min(spec.duration_s, t + len);
        if (on && end > t) out.push_back({t, end});
        t += len;
        on = !on;
    }
    return out;
}

double reference_enbw_hz(double chain_rate_hz) {
    constexpr std::size_t n = 8192;
    const auto w = blackman_harris4(n);
    return enbw_bins(w) * chain_rate_hz / static_cast<double>(n);
}

IQCapture synth_environment(const EnvironmentSpec& spec, double chain_cf_hz, double chain_rate_hz) {
    validate(spec);
    if (!(chain_rate_hz > 0.0)) throw ValidationError("chain_rate_hz must be positive");
    if (!std::isfinite(chain_cf_hz)) throw ValidationError("chain_cf_hz must be finite");

    const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * chain_rate_hz));
    const double fs_mhz = chain_rate_hz * 1e-6;
    const double full_scale_mw = std::pow(10.0, 0.1 * spec.cal_offset_db);
    const double span_lo = chain_cf_hz - 0.5 * chain_rate_hz;
    const double span_hi = chain_cf_hz + 0.5 * chain_rate_hz;
    const auto key = chain_key(chain_cf_hz, chain_rate_hz);

    std::vector<cdouble> acc(n);
    {
        Rng rng(derive_seed(spec.seed, {0x4e, key}));
        const double var = std::pow(10.0, 0.1 * spec.noise_psd_dbm_per_mhz) * fs_mhz / full_scale_mw;
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * var));
        for (auto& v : acc) {
            const double re = gauss(rng);
            v = cdouble(re, gauss(rng));
        }
    }

    for (std::size_t idx = 0; idx < spec.emitters.size(); ++idx) {
        const auto& e = spec.emitters[idx];
        const double half_bw = e.kind == EmitterKind::tone ? 0.0 : 0.5 * e.bandwidth_hz;
        const double lo = e.center_freq_hz - half_bw;
        const double hi = e.center_freq_hz + half_bw;
        const bool outside =
            e.kind == EmitterKind::tone ? (lo < span_lo || lo >= span_hi) : (hi <= span_lo || lo >= span_hi);
        if (outside) continue;
        if (lo < span_lo || hi > span_hi)
            throw ValidationError(emitter_tag(idx) + " (" + to_string(e.kind) + " at " +
                                  std::to_string(e.center_freq_hz) + " Hz) extends outside the chain span [" +
                                  std::to_string(span_lo) + ", " + std::to_string(span_hi) + "] Hz");

        const auto schedule = burst_schedule(e, idx, spec);
        if (schedule.empty()) continue;
        const auto env = envelope(schedule, n, chain_rate_hz);
        const double f_off = e.center_freq_hz - chain_cf_hz;
        const double psd_mw = std::pow(10.0, 0.1 * e.psd_dbm_per_mhz);
        Rng rng(derive_seed(spec.seed, {0x45, idx, key}));

        if (e.kind == EmitterKind::tone) {
            const double power_mw = psd_mw * reference_enbw_hz(chain_rate_hz) * 1e-6;
            const double amp = std::sqrt(power_mw / full_scale_mw);
            std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
            const double phi0 = ph(rng);
            const double w = 2.0 * std::numbers::pi * f_off / chain_rate_hz;
            for (std::size_t i = 0; i < n; ++i) {
                if (env[i] == 0.0) continue;
                // Reduce the phase argument to keep precision over long records.
                const double arg = std::fmod(w * static_cast<double>(i) + phi0, 2.0 * std::numbers::pi);
                acc[i] += amp * env[i] * cdouble(std::cos(arg), std::sin(arg));
            }
        } else {
            const auto x = bandpass_noise(n, e.bandwidth_hz, f_off, chain_rate_hz, rng);
            const double amp = std::sqrt(psd_mw * fs_mhz / full_scale_mw);
            for (std::size_t i = 0; i < n; ++i)
                if (env[i] != 0.0) acc[i] += amp * env[i] * x[i];
        }
    }

    IQCapture cap;
    cap.sample_rate_hz = chain_rate_hz;
    cap.center_freq_hz = chain_cf_hz;
    cap.cal_offset_db = spec.cal_offset_db;
    cap.start_time_s = 0.0;
    cap.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::norm(acc[i]) > 1.0)
            throw ValidationError("synthesized sample " + std::to_string(i) +
                                  " exceeds full scale; raise cal_offset_db");
        cap.samples[i] = cfloat(static_cast<float>(acc[i].real()), static_cast<float>(acc[i].imag()));
    }
    return cap;
}

void to_json(nlohmann::json& j, const EmitterSpec& e) {
    j = nlohmann::json{
        {"kind", to_string(e.kind)},
        {"center_freq_hz", e.center_freq_hz},
        {"bandwidth_hz", e.bandwidth_hz},
        {"psd_dbm_per_mhz", e.psd_dbm_per_mhz},
        {"duty_cycle", e.duty_cycle},
    };
    if (e.mean_on_s) j["mean_on_s"] = *e.mean_on_s;
    if (e.mean_off_s) j["mean_off_s"] = *e.mean_off_s;
}

namespace {

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* name : known) ok = ok || k == name;
        if (!ok) throw ValidationError(where + ": unknown field '" + k + "'");
    }
}

template <typename T>
T field(const nlohmann::json& j, const char* name, const std::string& where) {
    if (!j.contains(name)) throw ValidationError(where + ": missing field '" + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(where + ": field '" + name + "' has the wrong type");
    }
}

template <typename T>
T field_or(const nlohmann::json& j, const char* name, T fallback, const std::string& where) {
    return j.contains(name) ? field<T>(j, name, where) : fallback;
}

EmitterSpec parse_emitter(const nlohmann::json& j, const std::string& where) {
    reject_unknown(j,
                   {"kind", "center_freq_hz", "bandwidth_hz", "psd_dbm_per_mhz", "duty_cycle", "mean_on_s",
                    "mean_off_s"},
                   where);
    EmitterSpec e;
    e.kind = emitter_kind_from_string(field<std::string>(j, "kind", where));
    e.center_freq_hz = field<double>(j, "center_freq_hz", where);
    e.bandwidth_hz = field_or<double>(j, "bandwidth_hz", 0.0, where);
    e.psd_dbm_per_mhz = field<double>(j, "psd_dbm_per_mhz", where);
    e.duty_cycle = field_or<double>(j, "duty_cycle", 1.0, where);
    if (j.contains("mean_on_s")) e.mean_on_s = field<double>(j, "mean_on_s", where);
    if (j.contains("mean_off_s")) e.mean_off_s = field<double>(j, "mean_off_s", where);
    return e;
}

} // namespace

void from_json(const nlohmann::json& j, EmitterSpec& e) { e = parse_emitter(j, "emitter"); }

void to_json(nlohmann::json& j, const EnvironmentSpec& s) {
    j = nlohmann::json{
        {"emitters", s.emitters},
        {"noise_psd_dbm_per_mhz", s.noise_psd_dbm_per_mhz},
        {"duration_s", s.duration_s},
        {"seed", s.seed},
        {"cal_offset_db", s.cal_offset_db},
    };
}

void from_json(const nlohmann::json& j, EnvironmentSpec& s) {
    reject_unknown(j, {"emitters", "noise_psd_dbm_per_mhz", "duration_s", "seed", "cal_offset_db"}, "spec");
    s = EnvironmentSpec{};
    s.noise_psd_dbm_per_mhz = field_or<double>(j, "noise_psd_dbm_per_mhz", s.noise_psd_dbm_per_mhz, "spec");
    s.duration_s = field<double>(j, "duration_s", "spec");
    s.seed = field_or<std::uint64_t>(j, "seed", s.seed, "spec");
    s.cal_offset_db = field_or<double>(j, "cal_offset_db", s.cal_offset_db, "spec");
    if (j.contains("emitters")) {
        const auto& arr = j.at("emitters");
        if (!arr.is_array()) throw ValidationError("spec: field 'emitters' must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            s.emitters.push_back(parse_emitter(arr[i], "emitters[" + std::to_string(i) + "]"));
    }
}

} // namespace uwbnbi
