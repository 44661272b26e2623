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

#ifndef UWBNBI_SRC_FFT_HPP
#define UWBNBI_SRC_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>

namespace uwbnbi::detail {

// In-place unnormalized complex DFT of any length, FFTW_ESTIMATE plans cached
// per (length, direction). Safe to call from several threads.
void fft_forward(std::span<std::complex<double>> x);
void fft_inverse(std::span<std::complex<double>> x);

} // namespace uwbnbi::detail

#endif
