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

#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "uwbnbi/error.hpp"

namespace uwbnbi::tools {
namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 200, kTop = 40, kBottom = 60;
constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

std::string num(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", v);
    return b;
}

std::string tick_label(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%g", v);
    return b;
}

} // namespace

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

void write_svg_plot(const PlotSpec& spec, const std::vector<Series>& series, const std::filesystem::path& path) {
    if (series.empty()) throw ValidationError("nothing to plot");
    double x0 = INFINITY, x1 = -INFINITY;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw ValidationError("series '" + s.label + "' has mismatched x/y");
        for (double x : s.x) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
        }
    }
    if (!std::isfinite(x0)) throw ValidationError("all series are empty");
    if (x1 <= x0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    const double ly0 = std::log10(spec.y_floor), ly1 = std::log10(spec.y_ceiling);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) {
        const double ly = std::log10(std::clamp(y, spec.y_floor, spec.y_ceiling));
        return kTop + (ly1 - ly) / (ly1 - ly0) * ph;
    };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<title>" << xml_escape(spec.title) << "</title>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(spec.title) << "</text>\n";

    // grid and ticks
    o << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1)); ++e)
        o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(std::pow(10.0, e))) << "\" x2=\""
          << num(kLeft + pw) << "\" y2=\"" << num(py(std::pow(10.0, e))) << "\"/>\n";
    o << "</g>\n<g text-anchor=\"end\">\n";
    for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1)); ++e)
        o << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(std::pow(10.0, e)) + 4) << "\">1e" << e
          << "</text>\n";
    o << "</g>\n<g text-anchor=\"middle\">\n";
    for (int i = 0; i <= 6; ++i) {
        const double x = x0 + (x1 - x0) * i / 6.0;
        o << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 18) << "\">" << tick_label(x) << "</text>\n";
    }
    o << "</g>\n";
    o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
      << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16)
      << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n";
    o << "<text x=\"20\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << num(kTop + ph / 2) << ")\">" << xml_escape(spec.y_label) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* colour = kColours[i % std::size(kColours)];
        o << "<g id=\"series-" << i << "\"><title>" << xml_escape(s.label) << "</title>\n<polyline fill=\"none\" stroke=\""
          << colour << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) o << (k ? " " : "") << num(px(s.x[k])) << ',' << num(py(s.y[k]));
        o << "\"/>\n";
        for (std::size_t k = 0; k < s.x.size(); ++k)
            o << "<circle cx=\"" << num(px(s.x[k])) << "\" cy=\"" << num(py(s.y[k])) << "\" r=\"3\" fill=\"" << colour
              << "\"/>\n";
        o << "</g>\n";
        const double ly = kTop + 16 + 20.0 * static_cast<double>(i);
        o << "<line x1=\"" << num(kLeft + pw + 14) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kLeft + pw + 40)
          << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\""
          << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
          << "<text x=\"" << num(kLeft + pw + 46) << "\" y=\"" << num(ly + 4) << "\">" << xml_escape(s.label)
          << "</text>\n";
    }
    o << "<text x=\"" << num(kLeft + 4) << "\" y=\"" << num(kTop + ph - 6) << "\" font-size=\"10\" fill=\"#666666\">"
      << "values below " << tick_label(spec.y_floor) << " drawn at the floor</text>\n";
    o << "</svg>\n";

    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << o.str();
    if (!f) throw IoError("write failed: " + path.string());
}

} // namespace uwbnbi::tools
