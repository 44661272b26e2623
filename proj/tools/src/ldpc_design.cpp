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

// Generates the quasi-cyclic base matrix shipped in data/: block dual-diagonal
// parity part, regular information columns with rows filled evenly and
// circulant shifts drawn to avoid length-4 cycles.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace {

struct Base {
    std::size_t mb, nb, z;
    std::vector<long> b;  // -1 = zero block
    long& at(std::size_t r, std::size_t c) { return b[r * nb + c]; }
    long at(std::size_t r, std::size_t c) const { return b[r * nb + c]; }
};

bool closes_4cycle(const Base& B, std::size_t r, std::size_t c) {
    const long z = static_cast<long>(B.z);
    for (std::size_t r2 = 0; r2 < B.mb; ++r2) {
        if (r2 == r || B.at(r2, c) < 0) continue;
        for (std::size_t c2 = 0; c2 < B.nb; ++c2) {
            if (c2 == c || B.at(r, c2) < 0 || B.at(r2, c2) < 0) continue;
            const long d = B.at(r, c) - B.at(r2, c) + B.at(r2, c2) - B.at(r, c2);
            if (((d % z) + z) % z == 0) return true;
        }
    }
    return false;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QC-LDPC base matrix generator"};
    std::size_t lift = 128, kb = 20, mb = 40, degree = 5;
    std::uint64_t seed = 1;
    std::string out = "ldpc_qc_r13_k2560.json";
    app.add_option("--lift", lift, "circulant size");
    app.add_option("--info-blocks", kb, "information column blocks");
    app.add_option("--check-blocks", mb, "check row blocks");
    app.add_option("--degree", degree, "information column degree");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out, "output JSON");
    CLI11_PARSE(app, argc, argv);

    if (degree > mb) {
        std::cerr << "degree exceeds the number of check rows\n";
        return 2;
    }
    Base B{mb, kb + mb, lift, std::vector<long>(mb * (kb + mb), -1)};
    for (std::size_t j = 0; j < mb; ++j) {
        B.at(j, kb + j) = 0;
        if (j > 0) B.at(j, kb + j - 1) = 0;
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> load(mb, 0);
    std::size_t unresolved = 0;
    for (std::size_t c = 0; c < kb; ++c) {
        for (std::size_t d = 0; d < degree; ++d) {
            std::vector<std::size_t> cand;
            std::size_t least = SIZE_MAX;
            for (std::size_t r = 0; r < mb; ++r)
                if (B.at(r, c) < 0) least = std::min(least, load[r]);
            for (std::size_t r = 0; r < mb; ++r)
                if (B.at(r, c) < 0 && load[r] == least) cand.push_back(r);
            const std::size_t r = cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
            bool ok = false;
            for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
                B.at(r, c) = static_cast<long>(std::uniform_int_distribution<std::size_t>(0, lift - 1)(rng));
                ok = !closes_4cycle(B, r, c);
            }
            unresolved += ok ? 0 : 1;
            ++load[r];
        }
    }

    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t r = 0; r < mb; ++r)
        for (std::size_t c = 0; c < kb + mb; ++c)
            if (B.at(r, c) >= 0) entries.push_back({r, c, B.at(r, c)});
    nlohmann::json j{
        {"description", "Systematic QC-LDPC base matrix: information blocks first, then a dual-diagonal parity "
                        "part. Entry [row, col, shift]: row z of the block checks bit col*lift + (z + shift) mod lift."},
        {"lift", lift},
        {"row_blocks", mb},
        {"col_blocks", kb + mb},
        {"info_column_degree", degree},
        {"seed", seed},
        {"entries", entries},
    };
    std::ofstream f(out);
    f << j.dump() << '\n';
    if (!f) {
        std::cerr << "cannot write " << out << "\n";
        return 1;
    }
    std::cout << "wrote " << out << " (" << entries.size() << " blocks, " << unresolved
              << " shifts left on a 4-cycle)\n";
    return unresolved == 0 ? 0 : 3;
}
