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
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "svg_plot.hpp"
#include "uwbnbi/capacity.hpp"
#include "uwbnbi/data_files.hpp"
#include "uwbnbi/envgen.hpp"
#include "uwbnbi/error.hpp"
#include "uwbnbi/link.hpp"
#include "uwbnbi/spectrogram.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace uwbnbi::tools {
namespace {

// Run record; written after every other output.
struct Manifest {
    std::string subcommand;
    json inputs = json::array();
    json parameters = json::object();
    std::uint64_t seed = 0;
    std::vector<fs::path> outputs;

    void write(const fs::path& path) const {
        json j{
            {"subcommand", subcommand},
            {"tool_version", UWBNBI_VERSION},
            {"inputs", inputs},
            {"parameters", parameters},
            {"seed", seed},
        };
        json outs = json::array();
        for (const auto& o : outputs) {
            if (!fs::exists(o)) throw IoError("declared output missing: " + o.string());
            outs.push_back(o.string());
        }
        j["outputs"] = outs;
        std::ofstream f(path, std::ios::trunc);
        if (!f) throw IoError("cannot open " + path.string() + " for writing");
        f << j.dump(2) << '\n';
        if (!f) throw IoError("write failed: " + path.string());
    }
};

fs::path manifest_path(const std::string& flag, const fs::path& primary) {
    if (!flag.empty()) return flag;
    auto p = primary;
    p += ".manifest.json";
    return p;
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::vector<double> parse_distances(const std::string& text) {
    std::vector<double> out;
    auto number = [&](const std::string& s) {
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != s.size()) throw ValidationError("bad distance '" + s + "'");
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ValidationError("distance range must be a:b:step");
        const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
        if (!(step > 0.0) || b < a) throw ValidationError("distance range needs a <= b and step > 0");
        const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
    } else {
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
    }
    if (out.empty()) throw ValidationError("no distances given");
    return out;
}

NoiseModel noise_model(double base) {
    NoiseModel nm;
    nm.base_psd_dbm_per_mhz = base;
    return nm;
}

// ---------------------------------------------------------------- env
struct EnvArgs {
    std::string spec;
    std::string out;
    double cf = NAN;
    double rate = 200e6;
    std::size_t chains = 1;
    double spacing = 160e6;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    std::string manifest;
};

int cmd_env(const EnvArgs& a) {
    auto spec_json = read_json_file(a.spec);
    EnvironmentSpec spec = spec_json.get<EnvironmentSpec>();
    if (a.seed) spec.seed = *a.seed;
    if (a.duration) spec.duration_s = *a.duration;
    validate(spec);

    Manifest m;
    m.subcommand = "env";
    m.inputs.push_back(a.spec);
    m.seed = spec.seed;
    m.parameters = {{"spec", spec}, {"chain_rate_hz", a.rate}, {"chains", a.chains}, {"chain_spacing_hz", a.spacing}};
    json cfs = json::array();
    const fs::path out(a.out);
    for (std::size_t c = 0; c < a.chains; ++c) {
        const double cf = a.cf + (static_cast<double>(c) - 0.5 * static_cast<double>(a.chains - 1)) * a.spacing;
        fs::path payload = out;
        if (a.chains > 1) {
            payload = out.parent_path() / (out.stem().string() + "_" + std::to_string(c) + out.extension().string());
        }
        const auto cap = synth_environment(spec, cf, a.rate);
        export_iq(cap, payload);
        m.outputs.push_back(payload);
        m.outputs.push_back(sidecar_path(payload));
        cfs.push_back(cf);
        std::cout << payload.string() << ": " << cap.samples.size() << " samples at " << cf << " Hz\n";
    }
    m.parameters["chain_cf_hz"] = cfs;
    m.write(manifest_path(a.manifest, out));
    return 0;
}

// ---------------------------------------------------------------- specgram
struct SpecgramArgs {
    std::vector<std::string> in;
    std::string out;
    bool stitch = false;
    std::size_t nfft = 8192;
    double keep = 0.8;
    std::string manifest;
};

int cmd_specgram(const SpecgramArgs& a) {
    if (a.in.size() > 1 && !a.stitch) throw ValidationError("several captures need --stitch");
    std::vector<SpectrogramGrid> grids;
    double rate = 0.0;
    for (const auto& path : a.in) {
        const auto cap = import_iq(path);
        if (rate == 0.0) rate = cap.sample_rate_hz;
        if (cap.sample_rate_hz != rate)
            throw ValidationError("mismatched sample rates: " + path + " is at " + std::to_string(cap.sample_rate_hz) +
                                  " Hz, expected " + std::to_string(rate) + " Hz");
        grids.push_back(compute_spectrogram(cap, a.nfft));
    }
    const auto grid = a.stitch ? stitch(grids, a.keep) : grids.front();
    write_grid(grid, a.out);

    const double span = grid.bin_freq_hz(grid.n_freq() - 1) - grid.bin_freq_hz(0) + grid.df_hz();
    std::cout.precision(12);
    std::cout << "df_hz " << grid.df_hz() << "\ndt_s " << grid.dt_s() << "\nn_time " << grid.n_time() << "\nn_freq "
              << grid.n_freq() << "\nspan_hz " << span << '\n';

    Manifest m;
    m.subcommand = "specgram";
    for (const auto& p : a.in) m.inputs.push_back(p);
    m.parameters = {{"nfft", a.nfft},      {"stitch", a.stitch},         {"keep_fraction", a.keep},
                    {"df_hz", grid.df_hz()}, {"dt_s", grid.dt_s()},       {"span_hz", span},
                    {"n_time", grid.n_time()}, {"n_freq", grid.n_freq()}};
    m.outputs.push_back(a.out);
    m.write(manifest_path(a.manifest, a.out));
    return 0;
}

// ---------------------------------------------------------------- outage
struct OutageArgs {
    std::string grid;
    std::optional<int> channel;
    std::optional<double> rate;
    std::optional<double> interval;
    std::optional<std::string> env;
    std::string dist = "1:20:1";
    std::string out;
    std::string plot;
    std::string preset;
    double noise = -107.0;
    std::size_t max_intervals = 0;
    std::string manifest;
};

int cmd_outage(const OutageArgs& a) {
    int channel = 2;
    double rate = 0, interval = 0;
    std::string env = "office_los";
    if (!a.preset.empty()) {
        OutagePreset p;
        if (a.preset == "hirate-los") {
            if (a.rate) throw ValidationError("--rate conflicts with --preset hirate-los");
            p = hirate_los_preset();
        } else if (a.preset == "lorate-nlos") {
            const double r = a.rate.value_or(110e3);
            bool known = false;
            for (double v : lorate_rates_bps()) known = known || std::abs(v - r) < 1e-6;
            if (!known) throw ValidationError("--preset lorate-nlos takes --rate 31250, 110000 or 250000");
            p = lorate_nlos_preset(r);
        } else {
            throw ValidationError("unknown preset '" + a.preset + "' (hirate-los, lorate-nlos)");
        }
        if (a.interval || a.env || a.channel)
            throw ValidationError("--interval, --env and --channel conflict with --preset");
        channel = p.channel;
        rate = p.rate_bps;
        interval = p.interval_s;
        env = to_string(p.environment);
    } else {
        if (!a.rate || !a.interval) throw ValidationError("--rate and --interval are required without --preset");
        channel = a.channel.value_or(2);
        rate = *a.rate;
        interval = *a.interval;
        env = a.env.value_or("office_los");
    }

    const auto grid = read_grid(a.grid);
    const auto plan = channel_plan(channel);
    const auto plp = load_path_loss(environment_from_string(env));
    const auto nm = noise_model(a.noise);
    const auto curve = outage_curve(grid, plan, plp, nm, rate, interval, parse_distances(a.dist), a.max_intervals);
    write_outage_csv(curve, a.out);

    Manifest m;
    m.subcommand = "outage";
    m.inputs.push_back(a.grid);
    m.parameters = {{"channel", channel},
                    {"rate_bps", rate},
                    {"interval_s", interval},
                    {"environment", env},
                    {"distances_m", curve.distances_m},
                    {"noise_psd_dbm_per_mhz", a.noise},
                    {"n_intervals", curve.n_intervals},
                    {"columns_per_interval", curve.columns_per_interval},
                    {"preset", a.preset}};
    m.outputs.push_back(a.out);
    if (!a.plot.empty()) {
        char title[160];
        std::snprintf(title, sizeof title, "Outage, channel %d, %s, %.6g bps, T = %.6g s", channel, env.c_str(), rate,
                      interval);
        write_svg_plot({title, "Distance (m)", "Outage probability (fraction of intervals)"},
                       {{"suppressed", curve.distances_m, curve.pout_suppressed, false},
                        {"unsuppressed", curve.distances_m, curve.pout_unsuppressed, false}},
                       a.plot);
        m.outputs.push_back(a.plot);
    }
    for (std::size_t i = 0; i < curve.distances_m.size(); ++i)
        std::cout << curve.distances_m[i] << ' ' << curve.pout_suppressed[i] << ' ' << curve.pout_unsuppressed[i]
                  << '\n';
    m.write(manifest_path(a.manifest, a.out));
    return 0;
}

// ---------------------------------------------------------------- linksim
struct LinksimArgs {
    std::string grid;
    std::string interference;
    int channel = 2;
    std::string dist = "5";
    long trials = 100;
    std::string suppression = "both";
    std::uint64_t seed = 1;
    std::string out;
    std::string csv;
    double noise = -107.0;
    std::string env = "office_los";
    unsigned threads = 0;
    bool no_multipath = false;
    std::string manifest;
};

int cmd_linksim(const LinksimArgs& a) {
    if (a.trials < 1) throw ValidationError("--trials must be at least 1");
    if (!a.grid.empty() && !a.interference.empty()) throw ValidationError("give --grid or --interference, not both");
    std::vector<Suppression> modes;
    if (a.suppression == "on" || a.suppression == "both") modes.push_back(Suppression::on);
    if (a.suppression == "off" || a.suppression == "both") modes.push_back(Suppression::off);
    if (modes.empty()) throw ValidationError("--suppression must be on, off or both");

    LinkParams p;
    p.config.channel = a.channel;
    p.path_loss = load_path_loss(environment_from_string(a.env));
    p.noise = noise_model(a.noise);
    p.multipath_enabled = !a.no_multipath;
    p.trials = static_cast<std::size_t>(a.trials);
    p.seed = a.seed;
    p.threads = a.threads;

    SpectrogramGrid grid;
    IQCapture cap;
    InterferenceSource src = NoInterference{};
    json interference{{"kind", "none"}};
    if (!a.grid.empty()) {
        grid = read_grid(a.grid);
        src = GridInterference{&grid};
        interference = {{"kind", "grid"}, {"path", a.grid}};
    } else if (!a.interference.empty()) {
        cap = import_iq(a.interference);
        src = CaptureInterference{&cap};
        interference = {{"kind", "capture"}, {"path", a.interference}};
    }

    const auto distances = parse_distances(a.dist);
    json results = json::array();
    std::vector<FerPoint> points;
    for (double d : distances) {
        p.distance_m = d;
        const auto rs = simulate_link(p, src, modes);
        FerPoint fp{d, NAN, NAN};
        for (const auto& r : rs) {
            results.push_back(r);
            (r.suppression == Suppression::on ? fp.fer_suppressed : fp.fer_unsuppressed) = r.fer;
            std::cout << "d=" << d << " m suppression " << to_string(r.suppression) << ": " << r.frame_errors << '/'
                      << r.trials << " frames in error (FER " << r.fer << ", BER " << r.ber << ")\n";
        }
        points.push_back(fp);
    }

    json doc{{"tool_version", UWBNBI_VERSION},
             {"config", p.config},
             {"channel", a.channel},
             {"environment", a.env},
             {"multipath", p.multipath_enabled ? to_string(p.multipath) : "none"},
             {"noise_psd_dbm_per_mhz", a.noise},
             {"interference", interference},
             {"trials", p.trials},
             {"seed", a.seed},
             {"frame_duration_s", frame_duration_s(p.config)},
             {"info_rate_bps", info_rate_bps(p.config)},
             {"results", results}};
    {
        std::ofstream f(a.out, std::ios::trunc);
        if (!f) throw IoError("cannot open " + a.out + " for writing");
        f << doc.dump(2) << '\n';
        if (!f) throw IoError("write failed: " + a.out);
    }

    Manifest m;
    m.subcommand = "linksim";
    if (!a.grid.empty()) m.inputs.push_back(a.grid);
    if (!a.interference.empty()) m.inputs.push_back(a.interference);
    m.seed = a.seed;
    m.parameters = {{"channel", a.channel},      {"distances_m", distances},  {"trials", p.trials},
                    {"suppression", a.suppression}, {"environment", a.env}, {"noise_psd_dbm_per_mhz", a.noise},
                    {"multipath", !a.no_multipath}};
    m.outputs.push_back(a.out);
    if (!a.csv.empty()) {
        write_fer_csv(points, a.csv);
        m.outputs.push_back(a.csv);
    }
    m.write(manifest_path(a.manifest, a.out));
    return 0;
}

// ---------------------------------------------------------------- report
struct ReportArgs {
    std::vector<std::string> in;
    std::string out;
    std::string title = "Outage probability and frame error rate";
    std::string manifest;
};

std::vector<Series> read_csv_series(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::string> header;
    std::vector<std::vector<double>> cols;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        if (header.empty()) {
            header = cells;
            if (header.size() < 2) throw ValidationError(path.string() + ": need at least two columns");
            cols.resize(header.size());
            continue;
        }
        if (cells.size() != header.size())
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(header.size()) + " cells");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            try {
                cols[i].push_back(std::stod(cells[i]));
            } catch (const std::exception&) {
                throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cells[i] + "'");
            }
        }
    }
    if (header.empty() || cols[0].empty()) throw ValidationError(path.string() + ": no data rows");
    std::vector<Series> out;
    for (std::size_t i = 1; i < header.size(); ++i) {
        Series s;
        s.label = path.stem().string() + ": " + header[i];
        s.x = cols[0];
        s.y = cols[i];
        s.dashed = header[i].rfind("fer", 0) == 0;
        out.push_back(std::move(s));
    }
    return out;
}

int cmd_report(const ReportArgs& a) {
    std::vector<Series> all;
    for (const auto& p : a.in) {
        auto s = read_csv_series(p);
        all.insert(all.end(), s.begin(), s.end());
    }
    write_svg_plot({a.title, "Distance (m)", "Probability (outage or frame error rate)"}, all, a.out);
    Manifest m;
    m.subcommand = "report";
    for (const auto& p : a.in) m.inputs.push_back(p);
    m.parameters = {{"title", a.title}, {"series", all.size()}};
    m.outputs.push_back(a.out);
    m.write(manifest_path(a.manifest, a.out));
    return 0;
}

} // namespace
} // namespace uwbnbi::tools

int main(int argc, char** argv) {
    using namespace uwbnbi::tools;
    CLI::App app{"uwbnbi: narrow-band interference analysis for UWB links"};
    app.set_version_flag("--version", std::string(UWBNBI_VERSION));
    app.require_subcommand(1);
    std::string data_dir;
    app.add_option("--data-dir", data_dir, "directory with the bundled parameter tables");

    EnvArgs env;
    auto* c_env = app.add_subcommand("env", "synthesize an interference environment as calibrated IQ");
    c_env->add_option("spec", env.spec, "environment spec (JSON)")->required()->check(CLI::ExistingFile);
    c_env->add_option("--out", env.out, "IQ payload path (sidecar written next to it)")->required();
    c_env->add_option("--cf", env.cf, "centre frequency of the (middle of the) chains, Hz")->required();
    c_env->add_option("--rate", env.rate, "chain sample rate, Hz");
    c_env->add_option("--chains", env.chains, "number of radio chains")->check(CLI::PositiveNumber);
    c_env->add_option("--spacing", env.spacing, "chain centre spacing, Hz");
    c_env->add_option("--seed", env.seed, "override the spec seed");
    c_env->add_option("--duration", env.duration, "override the spec duration, s");
    c_env->add_option("--manifest", env.manifest, "manifest path");

    SpecgramArgs sg;
    auto* c_sg = app.add_subcommand("specgram", "calibrated spectrogram of one or more captures");
    c_sg->add_option("--in", sg.in, "IQ payload(s)")->required()->check(CLI::ExistingFile);
    c_sg->add_option("--out", sg.out, "grid file")->required();
    c_sg->add_flag("--stitch", sg.stitch, "join the chains into one wideband grid");
    c_sg->add_option("--nfft", sg.nfft, "segment length");
    c_sg->add_option("--keep", sg.keep, "kept fraction of each chain's bins");
    c_sg->add_option("--manifest", sg.manifest, "manifest path");

    OutageArgs og;
    auto* c_og = app.add_subcommand("outage", "outage probability versus distance");
    c_og->add_option("--grid", og.grid, "grid file")->required()->check(CLI::ExistingFile);
    c_og->add_option("--channel", og.channel, "channel id (1-4)");
    c_og->add_option("--rate", og.rate, "rate R, bit/s");
    c_og->add_option("--interval", og.interval, "outage interval T, s");
    c_og->add_option("--env", og.env, "path-loss environment, e.g. office_los");
    c_og->add_option("--dist", og.dist, "distances: a:b:step or a,b,c (m)");
    c_og->add_option("--out", og.out, "CSV output")->required();
    c_og->add_option("--plot", og.plot, "SVG plot output");
    c_og->add_option("--preset", og.preset, "hirate-los or lorate-nlos");
    c_og->add_option("--noise-psd", og.noise, "equipment noise PSD, dBm/MHz");
    c_og->add_option("--max-intervals", og.max_intervals, "evaluate only the leading intervals");
    c_og->add_option("--manifest", og.manifest, "manifest path");

    LinksimArgs ls;
    auto* c_ls = app.add_subcommand("linksim", "FBMC-SS link-level simulation");
    c_ls->add_option("--grid", ls.grid, "interference grid file")->check(CLI::ExistingFile);
    c_ls->add_option("--interference", ls.interference, "interference IQ capture")->check(CLI::ExistingFile);
    c_ls->add_option("--channel", ls.channel, "channel id");
    c_ls->add_option("--dist", ls.dist, "distance(s): d, a:b:step or a,b,c (m)");
    c_ls->add_option("--trials", ls.trials, "frames per distance");
    c_ls->add_option("--suppression", ls.suppression, "on, off or both");
    c_ls->add_option("--seed", ls.seed, "master seed");
    c_ls->add_option("--out", ls.out, "JSON output")->required();
    c_ls->add_option("--csv", ls.csv, "FER sweep CSV output");
    c_ls->add_option("--noise-psd", ls.noise, "equipment noise PSD, dBm/MHz");
    c_ls->add_option("--env", ls.env, "path-loss environment");
    c_ls->add_option("--threads", ls.threads, "worker threads (0 = all cores)");
    c_ls->add_flag("--no-multipath", ls.no_multipath, "flat channel instead of S-V multipath");
    c_ls->add_option("--manifest", ls.manifest, "manifest path");

    ReportArgs rp;
    auto* c_rp = app.add_subcommand("report", "overlay outage and FER CSVs in one SVG");
    c_rp->add_option("--in", rp.in, "CSV inputs")->required()->check(CLI::ExistingFile);
    c_rp->add_option("--out", rp.out, "SVG output")->required();
    c_rp->add_option("--title", rp.title, "plot title");
    c_rp->add_option("--manifest", rp.manifest, "manifest path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!data_dir.empty()) uwbnbi::set_data_dir(data_dir);
        if (c_env->parsed()) return cmd_env(env);
        if (c_sg->parsed()) return cmd_specgram(sg);
        if (c_og->parsed()) return cmd_outage(og);
        if (c_ls->parsed()) return cmd_linksim(ls);
        if (c_rp->parsed()) return cmd_report(rp);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
