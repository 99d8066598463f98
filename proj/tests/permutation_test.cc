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

#include <set>

#include "gtest/gtest.h"
#include "perminv/errors.h"

using namespace perminv;

TEST(permutation, validates_bijection) {
    EXPECT_THROW(Permutation(1, {0, 0}), ContractViolation);
    EXPECT_THROW(Permutation(2, {0, 1, 2}), ContractViolation);
    Permutation p(2, {2, 0, 3, 1});
    for (uint64_t x = 0; x < 4; x++) {
        EXPECT_EQ(p.inverse(p(x)), x);
    }
}

TEST(permutation, random_is_deterministic_bijection) {
    for (int n = 1; n <= 8; n++) {
        auto a = Permutation::random(n, 1234 + n);
        auto b = Permutation::random(n, 1234 + n);
        EXPECT_EQ(a, b);
        std::set<uint64_t> seen(a.table().begin(), a.table().end());
        EXPECT_EQ(seen.size(), a.size());
    }
}

TEST(permutation, random_matches_reference_fisher_yates) {
    // Replays the sampler contract with a bare engine.
    Rng rng(99);
    std::vector<uint64_t> t(16);
    for (uint64_t i = 0; i < 16; i++) {
        t[i] = i;
    }
    for (uint64_t i = 15; i >= 1; i--) {
        std::swap(t[i], t[rng.uniform_below(i + 1)]);
    }
    EXPECT_EQ(Permutation::random(4, 99), Permutation(4, t));
}

TEST(permutation, composition_and_inverse) {
    auto a = Permutation::random(3, 1);
    auto b = Permutation::random(3, 2);
    auto ab = a.after(b);
    for (uint64_t x = 0; x < 8; x++) {
        EXPECT_EQ(ab(x), a(b(x)));
        EXPECT_EQ(a.inverted()(a(x)), x);
    }
}

TEST(permutation, json_round_trip) {
    auto p = Permutation::random(4, 5);
    nlohmann::json j = p;
    EXPECT_TRUE(j.is_array());
    EXPECT_EQ(j.get<Permutation>(), p);
    EXPECT_THROW(nlohmann::json::parse("[0, 0]").get<Permutation>(), ContractViolation);
}

TEST(permutation, uniformity_of_sampler) {
    // N = 4: 24 permutations, chi-square with 23 dof.
    std::map<std::vector<uint64_t>, int> counts;
    const int trials = 24000;
    for (int t = 0; t < trials; t++) {
        auto p = Permutation::random(2, derive_seed(7, t));
        counts[std::vector<uint64_t>(p.table().begin(), p.table().end())]++;
    }
    ASSERT_EQ(counts.size(), 24u);
    double chi = 0;
    for (auto &[k, c] : counts) {
        double e = trials / 24.0;
        chi += (c - e) * (c - e) / e;
    }
    EXPECT_LT(chi, 60.0);  // p ~ 4e-5 under the null
}

TEST(all_permutations, counts) {
    EXPECT_EQ(all_permutations(1).size(), 2u);
    EXPECT_EQ(all_permutations(2).size(), 24u);
    EXPECT_THROW(all_permutations(4), ContractViolation);
}
