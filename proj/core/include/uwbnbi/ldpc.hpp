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

#ifndef UWBNBI_LDPC_HPP
#define UWBNBI_LDPC_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace uwbnbi {

// Systematic quasi-cyclic LDPC code whose parity part is a block dual
// diagonal of identities, so encoding is an accumulation over row blocks.
class QcLdpcCode {
public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        std::size_t shift;
    };

    QcLdpcCode(std::size_t lift, std::size_t row_blocks, std::size_t col_blocks, std::vector<Entry> entries);

    // Bundled rate-1/3, 2560-bit code unless a path is given.
    static QcLdpcCode load(const std::optional<std::filesystem::path>& path = std::nullopt);

    std::size_t lift() const { return z_; }
    std::size_t info_bits() const { return (nb_ - mb_) * z_; }
    std::size_t coded_bits() const { return nb_ * z_; }
    std::size_t parity_checks() const { return mb_ * z_; }
    double rate() const { return static_cast<double>(info_bits()) / static_cast<double>(coded_bits()); }
    const std::vector<Entry>& entries() const { return entries_; }

    std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;
    bool is_codeword(std::span<const std::uint8_t> bits) const;

    struct DecodeResult {
        std::vector<std::uint8_t> info;
        bool converged = false;
        int iterations = 0;
    };

    // Layered normalized min-sum. LLR > 0 favours bit 0.
    DecodeResult decode(std::span<const double> llr, int max_iterations = 50, double normalization = 0.8) const;

private:
    std::size_t z_;
    std::size_t mb_;
    std::size_t nb_;
    std::vector<Entry> entries_;
    // Per row block: (column block, shift), info part only.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> info_rows_;
    // Per row block: all (column block, shift).
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rows_;
};

} // namespace uwbnbi

#endif
