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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "perminv/random.h"
#include "perminv/statevector.h"

namespace perminv {

/// A bijection on [N], N = 2^n_bits, stored with its inverse table.
class Permutation {
   public:
    Permutation() = default;
    /// Validates that `table` is a bijection on [2^n_bits].
    Permutation(int n_bits, std::vector<uint64_t> table);

    static Permutation identity(int n_bits);
    /// Fisher–Yates from the top: for i = N-1 down to 1, swap slot i with
    /// slot uniform_below(i + 1), starting from the identity.
    static Permutation random(int n_bits, Rng &rng);
    static Permutation random(int n_bits, uint64_t seed);

    int n_bits() const {
        return n_bits_;
    }
    uint64_t size() const {
        return table_.size();
    }
    uint64_t operator()(uint64_t x) const {
        return table_[x];
    }
    uint64_t inverse(uint64_t y) const {
        return inverse_[y];
    }
    std::span<const uint64_t> table() const {
        return table_;
    }
    std::span<const uint64_t> inverse_table() const {
        return inverse_;
    }

    Permutation inverted() const;
    /// (this ∘ inner)(x) = this(inner(x)).
    Permutation after(const Permutation &inner) const;

    ClassicalFunctionTable forward_function() const;

    friend bool operator==(const Permutation &a, const Permutation &b) {
        return a.n_bits_ == b.n_bits_ && a.table_ == b.table_;
    }

   private:
    int n_bits_ = 0;
    std::vector<uint64_t> table_;
    std::vector<uint64_t> inverse_;
};

/// Permutations serialize as a JSON array of their table.
void to_json(nlohmann::json &j, const Permutation &p);
void from_json(const nlohmann::json &j, Permutation &p);

/// Enumerates every permutation of [2^n_bits] in lexicographic order (n_bits <= 3).
std::vector<Permutation> all_permutations(int n_bits);

}  // namespace perminv
