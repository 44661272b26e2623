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

#ifndef UWBNBI_DATA_FILES_HPP
#define UWBNBI_DATA_FILES_HPP

#include <filesystem>
#include <string_view>

namespace uwbnbi {

// Directory holding the bundled parameter tables (path loss, channel plan,
// S-V cluster parameters, LDPC base matrix). Lookup order: the directory set
// with set_data_dir(), the source tree, then the install prefix.
std::filesystem::path data_dir();
void set_data_dir(std::filesystem::path dir);

// data_dir() / name, throws IoError if the file does not exist.
std::filesystem::path data_file(std::string_view name);

} // namespace uwbnbi

#endif
