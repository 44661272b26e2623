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

#include "uwbnbi/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "uwbnbi/data_files.hpp"
#include "uwbnbi/error.hpp"

namespace uwbnbi {

QcLdpcCode::QcLdpcCode(std::size_t lift, std::size_t row_blocks, std::size_t col_blocks, std::vector<Entry> entries)
    : z_(lift), mb_(row_blocks), nb_(col_blocks), entries_(std::move(entries)), info_rows_(row_blocks),
      rows_(row_blocks) {
    if (z_ == 0 || mb_ == 0 || nb_ <= mb_) throw ValidationError("LDPC dimensions must satisfy lift > 0, 0 < mb < nb");
    const std::size_t kb = nb_ - mb_;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : entries_) {
        if (e.row >= mb_ || e.col >= nb_ || e.shift >= z_)
            throw ValidationError("LDPC base entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                                  ") out of range");
        if (!seen.insert({e.row, e.col}).second)
            throw ValidationError("duplicate LDPC base entry (" + std::to_string(e.row) + ", " +
                                  std::to_string(e.col) + ")");
        if (e.col >= kb) {
            const std::size_t pc = e.col - kb;
            if (e.shift != 0 || !(pc == e.row || pc + 1 == e.row))
                throw ValidationError("parity part must be a dual diagonal of identity blocks");
        } else {
            info_rows_[e.row].emplace_back(e.col, e.shift);
        }
        rows_[e.row].emplace_back(e.col, e.shift);
    }
    for (std::size_t r = 0; r < mb_; ++r) {
        if (!seen.count({r, kb + r})) throw ValidationError("parity diagonal incomplete");
        if (r > 0 && !seen.count({r, kb + r - 1})) throw ValidationError("parity sub-diagonal incomplete");
        std::sort(rows_[r].begin(), rows_[r].end());
        std::sort(info_rows_[r].begin(), info_rows_[r].end());
    }
}

QcLdpcCode QcLdpcCode::load(const std::optional<std::filesystem::path>& path) {
    const auto file = path ? *path : data_file("ldpc_qc_r13_k2560.json");
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    try {
        const auto j = nlohmann::json::parse(in);
        std::vector<Entry> entries;
        for (const auto& e : j.at("entries"))
            entries.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<std::size_t>()});
        return QcLdpcCode(j.at("lift").get<std::size_t>(), j.at("row_blocks").get<std::size_t>(),
                          j.at("col_blocks").get<std::size_t>(), std::move(entries));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(file.string() + ": " + e.what());
    }
}

std::vector<std::uint8_t> QcLdpcCode::encode(std::span<const std::uint8_t> info) const {
    if (info.size() != info_bits())
        throw ValidationError("LDPC encoder expects " + std::to_string(info_bits()) + " info bits, got " +
                              std::to_string(info.size()));
    std::vector<std::uint8_t> cw(coded_bits(), 0);
    std::copy(info.begin(), info.end(), cw.begin());
    const std::size_t kb = nb_ - mb_;
    std::vector<std::uint8_t> prev(z_, 0), acc(z_);
    for (std::size_t r = 0; r < mb_; ++r) {
        acc = prev;
        for (const auto& [c, s] : info_rows_[r])
            for (std::size_t z = 0; z < z_; ++z) acc[z] ^= info[c * z_ + (z + s) % z_] & 1u;
        std::copy(acc.begin(), acc.end(), cw.begin() + static_cast<long>((kb + r) * z_));
        prev = acc;
    }
    return cw;
}

bool QcLdpcCode::is_codeword(std::span<const std::uint8_t> bits) const {
    if (bits.size() != coded_bits()) return false;
    for (std::size_t r = 0; r < mb_; ++r)
        for (std::size_t z = 0; z < z_; ++z) {
            std::uint8_t p = 0;
            for (const auto& [c, s] : rows_[r]) p ^= bits[c * z_ + (z + s) % z_] & 1u;
            if (p) return false;
        }
    return true;
}

QcLdpcCode::DecodeResult QcLdpcCode::decode(std::span<const double> llr, int max_iterations,
                                            double normalization) const {
    if (llr.size() != coded_bits())
        throw ValidationError("LDPC decoder expects " + std::to_string(coded_bits()) + " LLRs, got " +
                              std::to_string(llr.size()));
    if (max_iterations < 1) throw ValidationError("max_iterations must be positive");

    std::vector<float> post(llr.size());
    for (std::size_t i = 0; i < llr.size(); ++i) {
        if (std::isnan(llr[i])) throw ValidationError("NaN LLR at position " + std::to_string(i));
        post[i] = static_cast<float>(std::clamp(llr[i], -1e30, 1e30));
    }
    std::size_t n_edges = 0;
    std::vector<std::size_t> row_offset(mb_);
    for (std::size_t r = 0; r < mb_; ++r) {
        row_offset[r] = n_edges;
        n_edges += rows_[r].size() * z_;
    }
    std::vector<float> msg(n_edges, 0.0f);
    std::vector<std::uint8_t> hard(coded_bits());
    std::vector<float> q;
    std::vector<std::size_t> var;
    const auto alpha = static_cast<float>(normalization);

    DecodeResult res;
    for (int it = 1; it <= max_iterations; ++it) {
        for (std::size_t r = 0; r < mb_; ++r) {
            const auto& row = rows_[r];
            const std::size_t deg = row.size();
            q.resize(deg);
            var.resize(deg);
            for (std::size_t z = 0; z < z_; ++z) {
                float* m = &msg[row_offset[r] + z * deg];
                float min1 = std::numeric_limits<float>::infinity(), min2 = min1;
                std::size_t arg = 0;
                bool neg = false;
                for (std::size_t e = 0; e < deg; ++e) {
                    const auto [c, s] = row[e];
                    var[e] = c * z_ + (z + s) % z_;
                    q[e] = post[var[e]] - m[e];
                    const float a = std::abs(q[e]);
                    neg ^= q[e] < 0.0f;
                    if (a < min1) {
                        min2 = min1;
                        min1 = a;
                        arg = e;
                    } else if (a < min2) {
                        min2 = a;
                    }
                }
                for (std::size_t e = 0; e < deg; ++e) {
                    const float mag = alpha * (e == arg ? min2 : min1);
                    const bool sgn = neg ^ (q[e] < 0.0f);
                    m[e] = sgn ? -mag : mag;
                    post[var[e]] = q[e] + m[e];
                }
            }
        }
        for (std::size_t i = 0; i < hard.size(); ++i) hard[i] = post[i] < 0.0f ? 1 : 0;
        res.iterations = it;
        if (is_codeword(hard)) {
            res.converged = true;
            break;
        }
    }
    res.info.assign(hard.begin(), hard.begin() + static_cast<long>(info_bits()));
    return res;
}

} // namespace uwbnbi
