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

#ifndef UWBNBI_ERROR_HPP
#define UWBNBI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace uwbnbi {

// Precondition or invariant violated by caller-supplied values.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// File missing, truncated or malformed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace uwbnbi

#endif
