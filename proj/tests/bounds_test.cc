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

#include "perminv/bounds.h"

#include <cmath>

#include "gtest/gtest.h"
#include "perminv/errors.h"
#include "test_util.h"

using namespace perminv;

namespace {

double binomial_cdf(int n, double p, int k_max) {
    double s = 0;
    for (int k = 0; k <= k_max; k++) {
        s += perminv::testing::binomial_pmf(n, p, k);
    }
    return s;
}

ClassicalFunctionTable random_table(int n, Rng &rng) {
    std::vector<uint64_t> t(1ULL << n);
    for (auto &v : t) {
        v = rng.uniform_below(1ULL << n);
    }
    return ClassicalFunctionTable(n, n, t);
}

}  // namespace

TEST(chernoff, examples) {
    auto tiny = chernoff_lower_tail(10, 0.5, 1e-9);
    EXPECT_NEAR(tiny.raw_value, 2.0, 1e-9);
    EXPECT_EQ(tiny.bound_value, 1.0);
    EXPECT_NEAR(chernoff_majority_tail(200, 0.6).raw_value, std::exp(-200 * 0.01 / 1.2), 1e-15);
    EXPECT_NEAR(chernoff_majority_tail(200, 0.6).bound_value, 0.1889, 1e-4);
    EXPECT_LE(binomial_cdf(200, 0.6, 100), chernoff_majority_tail(200, 0.6).bound_value);
    EXPECT_THROW(chernoff_lower_tail(10, 1.0, 0.5), ContractViolation);
    EXPECT_THROW(chernoff_lower_tail(10, 0.5, 1.0), ContractViolation);
}

TEST(chernoff, bounds_exact_binomial) {
    for (int n : {10, 50, 200}) {
        for (double p : {0.2, 0.55, 0.7, 0.9}) {
            for (double d : {0.1, 0.3, 0.6}) {
                double thresh = (1 - d) * n * p;
                int k_max = static_cast<int>(std::ceil(thresh)) - 1;
                double exact = k_max >= 0 ? binomial_cdf(n, p, k_max) : 0.0;
                EXPECT_LE(exact, chernoff_lower_tail(n, p, d).bound_value + 1e-15);
            }
            if (p > 0.5) {
                EXPECT_LE(binomial_cdf(n, p, n / 2), chernoff_majority_tail(n, p).bound_value + 1e-15);
            }
        }
    }
}

TEST(reverse_markov, examples_and_property) {
    EXPECT_EQ(reverse_markov(0.4, 0.4).bound_value, 0.0);
    EXPECT_EQ(reverse_markov(1.0, 0.3).bound_value, 1.0);
    EXPECT_THROW(reverse_markov(1.2, 0.3), ContractViolation);
    Rng rng(3);
    for (int t = 0; t < 1000; t++) {
        int k = 1 + static_cast<int>(rng.uniform_below(6));
        std::vector<double> values(k), weights(k);
        double wsum = 0;
        for (int i = 0; i < k; i++) {
            values[i] = rng.uniform01();
            weights[i] = rng.uniform01() + 1e-3;
            wsum += weights[i];
        }
        double theta = 0.01 + 0.98 * rng.uniform01();
        double e = 0, above = 0;
        for (int i = 0; i < k; i++) {
            e += values[i] * weights[i] / wsum;
            above += values[i] >= theta ? weights[i] / wsum : 0;
        }
        EXPECT_GE(above + 1e-12, reverse_markov(std::min(e, 1.0), theta).bound_value);
    }
}

TEST(averaging_subset, examples_and_property) {
    std::vector<double> flat(10, 0.3);
    EXPECT_EQ(averaging_subset(flat, 0.3, 0.5).size(), 10u);
    std::vector<double> half(10, 0.0);
    for (int i = 0; i < 5; i++) {
        half[i] = 0.6;
    }
    auto s = averaging_subset(half, 0.3, 0.5);
    EXPECT_EQ(s.size(), 5u);
    EXPECT_THROW(averaging_subset(half, 0.5, 0.5), ContractViolation);

    Rng rng(9);
    for (int t = 0; t < 1000; t++) {
        std::vector<double> table(1 + rng.uniform_below(40));
        double mean = 0;
        for (auto &p : table) {
            p = std::pow(rng.uniform01(), 3);
            mean += p;
        }
        mean /= table.size();
        if (mean <= 0) {
            continue;
        }
        double eps = mean * (0.2 + 0.8 * rng.uniform01());
        double theta = 0.05 + 0.9 * rng.uniform01();
        auto sub = averaging_subset(table, eps, theta);
        EXPECT_GE(sub.size() * (1 + 1e-12), (1 - theta) * eps * table.size());
        for (auto x : sub) {
            EXPECT_GE(table[x], theta * eps);
        }
    }
}

TEST(swapping_check, equal_functions) {
    Rng rng(1);
    auto f = random_table(3, rng);
    auto c = random_query_circuit(3, 4, 7);
    auto r = swapping_check(c, f, f, 4);
    EXPECT_EQ(r.distance, 0.0);
    EXPECT_TRUE(r.holds);
}

TEST(swapping_check, classical_queries_outside_set) {
    Rng rng(2);
    auto f = random_table(3, rng);
    std::vector<uint64_t> gt(f.table().begin(), f.table().end());
    gt[7] ^= 1;
    ClassicalFunctionTable g(3, 3, gt);
    QueryCircuit c;
    c.n_bits = 3;
    c.steps.push_back({QueryCircuit::Op::xor_constant, 0, 0, 0, 5});
    c.steps.push_back({});
    c.steps.push_back({QueryCircuit::Op::xor_constant, 0, 0, 0, 3});
    c.steps.push_back({});
    auto r = swapping_check(c, f, g, 2);
    EXPECT_EQ(r.magnitude, 0.0);
    EXPECT_EQ(r.distance, 0.0);
    EXPECT_TRUE(r.holds);
}

TEST(swapping_check, random_triples_hold) {
    Rng rng(12);
    int nontrivial = 0;
    for (int t = 0; t < 100; t++) {
        int n = 1 + static_cast<int>(rng.uniform_below(4));
        int T = 1 + static_cast<int>(rng.uniform_below(6));
        auto f = random_table(n, rng);
        std::vector<uint64_t> gt(f.table().begin(), f.table().end());
        for (auto &v : gt) {
            if (rng.bernoulli(0.3)) {
                v = rng.uniform_below(1ULL << n);
            }
        }
        ClassicalFunctionTable g(n, n, gt);
        auto c = random_query_circuit(n, T, rng.next());
        EXPECT_EQ(c.query_count(), static_cast<uint64_t>(T));
        auto r = swapping_check(c, f, g, T);
        EXPECT_TRUE(r.holds_hybrid) << r.distance << " > " << r.hybrid_bound;
        EXPECT_LE(r.magnitude, T + 1e-12);
        nontrivial += r.distance > 1e-6;
    }
    EXPECT_GT(nontrivial, 20);
}

TEST(swapping_check, single_classical_query_exceeds_unscaled_bound) {
    // One basis query on x in S: final states |x, f(x)> and |x, g(x)> are orthogonal.
    ClassicalFunctionTable f(1, 1, {0, 0});
    ClassicalFunctionTable g(1, 1, {0, 1});
    QueryCircuit c;
    c.n_bits = 1;
    c.steps.push_back({QueryCircuit::Op::xor_constant, 0, 0, 0, 1});
    c.steps.push_back({});
    auto r = swapping_check(c, f, g, 1);
    EXPECT_DOUBLE_EQ(r.magnitude, 1.0);
    EXPECT_NEAR(r.distance, std::sqrt(2.0), 1e-15);
    EXPECT_FALSE(r.holds);
    EXPECT_TRUE(r.holds_hybrid);
}

TEST(swapping_check, budget_enforced) {
    Rng rng(1);
    auto f = random_table(2, rng);
    auto c = random_query_circuit(2, 3, 7);
    EXPECT_THROW(swapping_check(c, f, f, 2), BudgetExceeded);
}
