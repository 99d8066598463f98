// Copyright 2026 The perminv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace perminv {

/// Raised when a caller breaks an operation's precondition (bad register,
/// overlapping ranges, malformed tables, out-of-range parameters).
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised by an oracle handle when an inverter exceeds its declared query budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when an inverter's advice is larger than its declared S.
struct ResourceViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace perminv
