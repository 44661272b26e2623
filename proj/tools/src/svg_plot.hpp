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

#ifndef UWBNBI_TOOLS_SVG_PLOT_HPP
#define UWBNBI_TOOLS_SVG_PLOT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace uwbnbi::tools {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    // Log-scale y; values below y_floor are drawn at y_floor.
    double y_floor = 1e-4;
    double y_ceiling = 1.0;
};

// Line plot with markers, log-y axis, legend. Writes standalone SVG 1.1.
void write_svg_plot(const PlotSpec& spec, const std::vector<Series>& series, const std::filesystem::path& path);

std::string xml_escape(const std::string& s);

} // namespace uwbnbi::tools

#endif
