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

#include "perminv/permutation.h"

#include <algorithm>
#include <bit>
#include <numeric>

#include "perminv/errors.h"

namespace perminv {

Permutation::Permutation(int n_bits, std::vector<uint64_t> table) : n_bits_(n_bits), table_(std::move(table)) {
    if (n_bits < 0 || n_bits > 24) {
        throw ContractViolation("permutation bit width out of range");
    }
    uint64_t n = 1ULL << n_bits;
    if (table_.size() != n) {
        throw ContractViolation("permutation table length must be 2^n_bits");
    }
    inverse_.assign(n, n);
    for (uint64_t x = 0; x < n; x++) {
        uint64_t y = table_[x];
        if (y >= n || inverse_[y] != n) {
            throw ContractViolation("permutation table is not a bijection");
        }
        inverse_[y] = x;
    }
}

Permutation Permutation::identity(int n_bits) {
    std::vector<uint64_t> t(1ULL << n_bits);
    std::iota(t.begin(), t.end(), 0);
    return Permutation(n_bits, std::move(t));
}

Permutation Permutation::random(int n_bits, Rng &rng) {
    std::vector<uint64_t> t(1ULL << n_bits);
    std::iota(t.begin(), t.end(), 0);
    for (uint64_t i = t.size() - 1; i > 0; i--) {
        std::swap(t[i], t[rng.uniform_below(i + 1)]);
    }
    return Permutation(n_bits, std::move(t));
}

Permutation Permutation::random(int n_bits, uint64_t seed) {
    Rng rng(seed);
    return random(n_bits, rng);
}

Permutation Permutation::inverted() const {
    return Permutation(n_bits_, inverse_);
}

Permutation Permutation::after(const Permutation &inner) const {
    if (inner.n_bits_ != n_bits_) {
        throw ContractViolation("composed permutations must have the same width");
    }
    std::vector<uint64_t> t(table_.size());
    for (uint64_t x = 0; x < t.size(); x++) {
        t[x] = table_[inner.table_[x]];
    }
    return Permutation(n_bits_, std::move(t));
}

ClassicalFunctionTable Permutation::forward_function() const {
    return ClassicalFunctionTable(n_bits_, n_bits_, table_);
}

void to_json(nlohmann::json &j, const Permutation &p) {
    j = nlohmann::json::array();
    for (uint64_t v : p.table()) {
        j.push_back(v);
    }
}

void from_json(const nlohmann::json &j, Permutation &p) {
    if (!j.is_array()) {
        throw ContractViolation("permutation JSON must be an array of integers");
    }
    auto table = j.get<std::vector<uint64_t>>();
    uint64_t n = table.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw ContractViolation("permutation length must be a power of two");
    }
    p = Permutation(std::countr_zero(n), std::move(table));
}

std::vector<Permutation> all_permutations(int n_bits) {
    if (n_bits > 3) {
        throw ContractViolation("full permutation enumeration is limited to n_bits <= 3");
    }
    std::vector<uint64_t> t(1ULL << n_bits);
    std::iota(t.begin(), t.end(), 0);
    std::vector<Permutation> out;
    do {
        out.emplace_back(n_bits, t);
    } while (std::next_permutation(t.begin(), t.end()));
    return out;
}

}  // namespace perminv
