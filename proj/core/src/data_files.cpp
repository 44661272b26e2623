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

#include "uwbnbi/data_files.hpp"

#include <mutex>
#include <optional>
#include <string>

#include "uwbnbi/error.hpp"

namespace uwbnbi {
namespace {

std::mutex g_mu;
std::optional<std::filesystem::path> g_override;

} // namespace

std::filesystem::path data_dir() {
    {
        std::lock_guard lock(g_mu);
        if (g_override) return *g_override;
    }
    std::filesystem::path src{UWBNBI_SOURCE_DATA_DIR};
    if (std::filesystem::is_directory(src)) return src;
    return std::filesystem::path{UWBNBI_INSTALL_DATA_DIR};
}

void set_data_dir(std::filesystem::path dir) {
    std::lock_guard lock(g_mu);
    g_override = std::move(dir);
}

std::filesystem::path data_file(std::string_view name) {
    auto p = data_dir() / std::string(name);
    if (!std::filesystem::exists(p)) throw IoError("data file not found: " + p.string());
    return p;
}

} // namespace uwbnbi
