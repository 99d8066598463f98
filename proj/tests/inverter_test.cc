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

#include "perminv/inverter.h"

#include <cmath>

#include "gtest/gtest.h"
#include "perminv/errors.h"

using namespace perminv;

namespace {

EvalMode exact(uint64_t perms, uint64_t rs = 1, uint64_t seed = 1) {
    EvalMode m;
    m.kind = EvalMode::Kind::exact;
    m.perm_samples = perms;
    m.r_samples = rs;
    m.seed = seed;
    return m;
}

EvalMode sampled(uint64_t trials, uint64_t seed = 2) {
    EvalMode m;
    m.kind = EvalMode::Kind::sampled;
    m.trials = trials;
    m.seed = seed;
    return m;
}

double grover_closed_form(int n, int k) {
    return std::pow(std::sin((2 * k + 1) * std::asin(1 / std::sqrt(std::ldexp(1.0, n)))), 2);
}

}  // namespace

TEST(run_search_experiment, full_table_and_constant) {
    EXPECT_DOUBLE_EQ(run_search_experiment(full_table_spi(3), exact(5)).success_probability, 1.0);
    auto c = run_search_experiment(constant_spi(3), exact(5));
    EXPECT_DOUBLE_EQ(c.success_probability, 1.0 / 8);
    EXPECT_EQ(c.queries_used, 0u);
}

TEST(run_search_experiment, rejects_wrong_kind) {
    EXPECT_THROW(run_search_experiment(constant_dpi(3), exact(1)), ContractViolation);
    EXPECT_THROW(run_decision_experiment(constant_spi(3), exact(1)), ContractViolation);
}

TEST(grover_spi, matches_closed_form) {
    EXPECT_NEAR(run_search_experiment(grover_spi(2, 1), exact(3)).success_probability, 1.0, 1e-12);
    EXPECT_NEAR(run_search_experiment(grover_spi(4, 0), exact(2)).success_probability, 1.0 / 16, 1e-12);
    for (int k = 0; k <= 3; k++) {
        auto r = run_search_experiment(grover_spi(4, k), exact(2));
        EXPECT_NEAR(r.success_probability, grover_closed_form(4, k), 1e-9);
        EXPECT_EQ(r.queries_used, 2u * k);
    }
    EXPECT_NEAR(grover_closed_form(4, 3), 0.9613, 1e-4);
}

TEST(grover_spi, budget_enforced) {
    auto inv = grover_spi(3, 2);
    inv.query_budget = 3;
    EXPECT_THROW(run_search_experiment(inv, exact(1)), BudgetExceeded);
}

TEST(lookup_spi, endpoints) {
    EXPECT_DOUBLE_EQ(run_search_experiment(lookup_spi(3, 1.0), exact(4, 2)).success_probability, 1.0);
    EXPECT_DOUBLE_EQ(run_search_experiment(lookup_spi(3, 0.0), exact(4, 2)).success_probability, 1.0 / 8);
    EXPECT_EQ(lookup_spi(3, 0.5).advice_qubits, 12u);
}

TEST(lookup_spi, half_coverage_per_configuration) {
    // Per (pi, r): success = 1/2 + [pi(0) uncovered] / N, exactly.
    auto inv = lookup_spi(3, 0.5);
    double mean = 0;
    int configs = 0;
    for (uint64_t ps = 0; ps < 40; ps++) {
        auto perm = Permutation::random(3, 500 + ps);
        for (uint64_t rs = 0; rs < 10; rs++) {
            Coins r{rs * 7919 + ps};
            auto order = Permutation::random(3, r.sub(0).seed);
            bool covered = false;
            for (uint64_t i = 0; i < 4; i++) {
                covered = covered || order(i) == perm(0);
            }
            double total = 0;
            for (uint64_t x = 0; x < 8; x++) {
                total += run_single(inv, perm, r, x).success;
            }
            EXPECT_DOUBLE_EQ(total / 8, 0.5 + (covered ? 0.0 : 1.0 / 8));
            mean += total / 8;
            configs++;
        }
    }
    // Averaged over r the uncovered event has probability 1/2.
    EXPECT_NEAR(mean / configs, 0.5 + 0.5 / 8, 0.02);
}

TEST(run_decision_experiment, baselines) {
    auto c = run_decision_experiment(constant_dpi(3), exact(10));
    EXPECT_DOUBLE_EQ(c.success_probability, 0.5);
    EXPECT_DOUBLE_EQ(run_decision_experiment(constant_dpi(3, 1), exact(10)).success_probability, 0.5);
    EXPECT_DOUBLE_EQ(run_decision_experiment(full_table_dpi(3), exact(10)).success_probability, 1.0);
    EXPECT_DOUBLE_EQ(run_decision_experiment(exhaustive_adpi(4, 1), exact(3)).success_probability, 1.0);
}

TEST(run_decision_experiment, synthetic_bias) {
    auto d = run_decision_experiment(synthetic_dpi(3, 0.1, 0, BiasSource::measurement), exact(3));
    EXPECT_NEAR(d.success_probability, 0.6, 1e-12);
    auto s = run_decision_experiment(synthetic_dpi(3, 0.1, 0, BiasSource::shared_randomness), sampled(20000));
    double sigma = std::sqrt(0.6 * 0.4 / 20000);
    EXPECT_NEAR(s.success_probability, 0.6, 4 * sigma);
}

TEST(synthetic_spi, dummy_queries_are_metered) {
    auto r = run_search_experiment(synthetic_spi(3, 0.25, 3, BiasSource::measurement), exact(2));
    EXPECT_NEAR(r.success_probability, 0.25, 1e-12);
    EXPECT_EQ(r.queries_used, 3u);
    EXPECT_EQ(r.advice_qubits_used, 24u);
}

TEST(run_single, resource_violation) {
    auto inv = full_table_spi(3);
    inv.advice_qubits = 5;
    EXPECT_THROW(run_search_experiment(inv, exact(1)), ResourceViolation);
    auto bad = exhaustive_adpi(3, 1);
    bad.adaptive_bits = 3;
    EXPECT_THROW(run_decision_experiment(bad, exact(1)), ContractViolation);
}

TEST(exact_vs_sampled, baselines_agree) {
    std::vector<InverterSpec> search{grover_spi(2, 1), grover_spi(3, 1), lookup_spi(3, 0.5), constant_spi(2)};
    for (const auto &inv : search) {
        EvalMode e = exact(0);
        e.enumerate_permutations = true;
        e.r_samples = inv.name == "lookup" ? 8 : 1;
        if (inv.n_bits == 3) {
            e.enumerate_permutations = false;
            e.perm_samples = 300;
        }
        double p = run_search_experiment(inv, e).success_probability;
        auto s = run_search_experiment(inv, sampled(100000, 17));
        double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / 100000);
        double slack = inv.name == "lookup" ? 0.01 : 0.0;  // exact side is itself sampled over r
        EXPECT_NEAR(s.success_probability, p, 4 * sigma + slack) << inv.name;
    }
    std::vector<InverterSpec> decision{constant_dpi(2), full_table_dpi(3), synthetic_dpi(3, 0.2, 1, BiasSource::measurement)};
    for (const auto &inv : decision) {
        double p = run_decision_experiment(inv, exact(20)).success_probability;
        auto s = run_decision_experiment(inv, sampled(100000, 23));
        double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / 100000);
        EXPECT_NEAR(s.success_probability, p, 4 * sigma) << inv.name;
    }
}

TEST(run_search_experiment, thread_count_invariance) {
    auto inv = grover_spi(3, 1);
    EvalMode a = sampled(500, 5);
    EvalMode b = a;
    b.threads = 4;
    auto ra = run_search_experiment(inv, a);
    auto rb = run_search_experiment(inv, b);
    EXPECT_EQ(ra.success_probability, rb.success_probability);
    EXPECT_EQ(ra.std_error, rb.std_error);
}

TEST(per_preimage_success, grover_is_uniform) {
    auto perm = Permutation::random(3, 4);
    auto v = per_preimage_success(grover_spi(3, 1), perm, 2, 9);
    for (double p : v) {
        EXPECT_NEAR(p, std::pow(std::sin(3 * std::asin(1 / std::sqrt(8.0))), 2), 1e-12);
    }
}
