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

#include "perminv/amplify.h"

#include <cmath>

#include "gtest/gtest.h"
#include "perminv/errors.h"
#include "test_util.h"

using namespace perminv;

namespace {

EvalMode exact(uint64_t perms, uint64_t rs = 1, uint64_t seed = 3) {
    EvalMode m;
    m.perm_samples = perms;
    m.r_samples = rs;
    m.seed = seed;
    return m;
}

}  // namespace

TEST(amplify_search, single_full_table) {
    auto amp = amplify_search(full_table_spi(3), 1);
    auto r = run_search_experiment(amp, exact(3));
    EXPECT_DOUBLE_EQ(r.success_probability, 1.0);
    EXPECT_EQ(amp.query_budget, 1u);
    EXPECT_EQ(r.queries_used, 1u);
}

TEST(amplify_search, synthetic_matches_repetition_formula) {
    int n = 4;
    for (double eps : {0.1, 0.25, 0.5}) {
        for (int ell = 1; ell <= 8; ell++) {
            auto base = synthetic_spi(n, eps, 2, BiasSource::measurement);
            auto amp = amplify_search(base, ell);
            auto r = run_search_experiment(amp, exact(2, 2));
            double found = 1 - std::pow(1 - eps, ell);
            ASSERT_TRUE(r.verified_probability.has_value());
            EXPECT_NEAR(*r.verified_probability, found, 1e-9);
            // A total failure outputs 0, which is correct when the preimage is 0.
            double end_to_end = found + std::pow(1 - eps, ell) / 16;
            EXPECT_NEAR(r.success_probability, end_to_end, 1e-9);
            EXPECT_GE(r.success_probability + 1e-12, found);
            EXPECT_EQ(amp.advice_qubits, ell * base.advice_qubits);
            EXPECT_EQ(amp.query_budget, ell * (base.query_budget + 1));
            EXPECT_EQ(r.queries_used, amp.query_budget);
            EXPECT_EQ(r.advice_qubits_used, amp.advice_qubits);
            EXPECT_EQ(r.oracle_calls, ell * (2 * base.query_budget + 1));
        }
    }
    EXPECT_DOUBLE_EQ(1 - std::pow(0.75, 4), 0.68359375);
}

TEST(amplify_search, circuit_mode_agrees) {
    auto base = synthetic_spi(3, 0.3, 1, BiasSource::measurement);
    auto a = run_search_experiment(amplify_search(base, 3, OracleMode::functional), exact(2));
    auto b = run_search_experiment(amplify_search(base, 3, OracleMode::circuit), exact(2));
    EXPECT_NEAR(a.success_probability, b.success_probability, 1e-12);
}

TEST(amplify_search, grover_base_improves) {
    auto base = grover_spi(3, 1);
    double p1 = run_search_experiment(base, exact(2)).success_probability;
    auto amp = run_search_experiment(amplify_search(base, 3), exact(2));
    EXPECT_NEAR(*amp.verified_probability, 1 - std::pow(1 - p1, 3), 1e-9);
}

TEST(amplify_search, rejects_bad_bases) {
    EXPECT_THROW(amplify_search(constant_dpi(3), 2), ContractViolation);
    EXPECT_THROW(amplify_search(full_table_spi(3), 0), ContractViolation);
    EXPECT_THROW(amplify_decision(exhaustive_adpi(4, 1), 3), ContractViolation);
}

TEST(amplify_search_restricted, ell_values) {
    EXPECT_EQ(restricted_ell(1.0), 3);
    EXPECT_EQ(restricted_ell(0.1), 24);
    EXPECT_THROW(restricted_ell(0.0), ContractViolation);
    EXPECT_THROW(restricted_ell(1.5), ContractViolation);
    auto r = amplify_search_restricted(synthetic_spi(3, 0.3, 2, BiasSource::measurement), 0.3);
    EXPECT_EQ(r.ell, 8);
    EXPECT_EQ(r.queries_protocol, 24u);
    EXPECT_EQ(r.queries_alternative, 18u);
}

TEST(amplify_search_restricted, target_property_holds) {
    auto base = synthetic_spi(3, 0.3, 0, BiasSource::shared_randomness);
    auto r = amplify_search_restricted(base, 0.3);
    int good = 0, pairs = 0;
    for (uint64_t k = 0; k < 10; k++) {
        auto perm = Permutation::random(3, 900 + k);
        auto success = per_preimage_success(r.inverter, perm, 30, 40 + k);
        for (double p : success) {
            good += p >= r.success_level;
            pairs++;
        }
    }
    EXPECT_GE(static_cast<double>(good) / pairs, r.pair_fraction);
}

TEST(amplify_decision, matches_binomial_tail) {
    auto base = synthetic_dpi(3, 0.1, 0, BiasSource::measurement);
    auto amp = amplify_decision(base, 200);
    auto r = run_decision_experiment(amp, exact(1));
    double tail = perminv::testing::majority_success(200, 0.6);
    EXPECT_NEAR(r.success_probability, tail, 1e-9);
    EXPECT_GE(r.success_probability, 1 - std::exp(-0.01 * 200 / 1.2));
}

TEST(amplify_decision, grid_of_bounds) {
    for (double delta : {0.05, 0.1, 0.25}) {
        for (int ell : {1, 2, 9, 25, 101}) {
            auto base = synthetic_dpi(2, delta, 1, BiasSource::measurement);
            auto amp = amplify_decision(base, ell);
            auto r = run_decision_experiment(amp, exact(1));
            double tail = perminv::testing::majority_success(ell, 0.5 + delta);
            EXPECT_NEAR(r.success_probability, tail, 1e-9);
            EXPECT_GE(r.success_probability + 1e-12, 1 - std::exp(-delta * delta * ell / (1 + 2 * delta)));
            EXPECT_EQ(r.queries_used, static_cast<uint64_t>(ell));
            EXPECT_EQ(amp.advice_qubits, ell * base.advice_qubits);
        }
    }
}

TEST(amplify_decision, perfect_and_single) {
    auto perfect = run_decision_experiment(amplify_decision(full_table_dpi(3), 4), exact(3));
    EXPECT_DOUBLE_EQ(perfect.success_probability, 1.0);
    auto base = synthetic_dpi(3, 0.2, 0, BiasSource::measurement);
    EXPECT_NEAR(run_decision_experiment(amplify_decision(base, 1), exact(2)).success_probability, 0.7, 1e-12);
}

TEST(amplify_decision, ties_go_to_zero) {
    EXPECT_DOUBLE_EQ(majority_one_probability({1.0, 0.0}), 0.0);
    EXPECT_DOUBLE_EQ(majority_one_probability({1.0, 1.0}), 1.0);
    EXPECT_NEAR(majority_one_probability({0.5, 0.5, 0.5}), 0.5, 1e-15);
}

TEST(repetition_plan, decision_sigma2_flips_first_bit_only) {
    auto plan = make_repetition_plan(4, 6, Coins{7}, InverterKind::decision);
    ASSERT_EQ(plan.per_iteration_seeds.size(), 12u);
    for (const auto &cj : plan.conjugators) {
        for (uint64_t x = 0; x < 16; x++) {
            EXPECT_EQ((*cj.sigma2)(x), x ^ (cj.flip << 3));
        }
    }
}

TEST(repetition_plan, iteration_successes_uncorrelated) {
    // Per-iteration success indicators of a shared-randomness base.
    const int trials = 10000, ell = 4;
    auto base = synthetic_spi(3, 0.5, 0, BiasSource::shared_randomness);
    std::vector<std::vector<double>> ind(ell, std::vector<double>(trials));
    for (int t = 0; t < trials; t++) {
        Coins r{derive_seed(55, t)};
        auto perm = Permutation::random(3, derive_seed(56, t));
        uint64_t x = t % 8;
        auto plan = make_repetition_plan(3, ell, r, InverterKind::search);
        for (int i = 0; i < ell; i++) {
            const auto &cj = plan.conjugators[i];
            Permutation conj = cj.sigma1->after(perm.after(*cj.sigma2));
            ind[i][t] = run_single(base, conj, plan.per_iteration_seeds[ell + i], cj.sigma2->inverse(x)).success;
        }
    }
    for (int a = 0; a < ell; a++) {
        for (int b = a + 1; b < ell; b++) {
            double ma = 0, mb = 0, mab = 0;
            for (int t = 0; t < trials; t++) {
                ma += ind[a][t];
                mb += ind[b][t];
                mab += ind[a][t] * ind[b][t];
            }
            ma /= trials;
            mb /= trials;
            double cov = mab / trials - ma * mb;
            // sd of the sample covariance of two independent Bernoulli(1/2) is 1/(4 sqrt(n)).
            EXPECT_LT(std::abs(cov), 4 * 0.25 / std::sqrt(trials));
        }
    }
}

TEST(required_ell_decision, examples) {
    EXPECT_EQ(required_ell_decision(0.5, std::exp(-1.0)), 8u);
    EXPECT_EQ(required_ell_decision(0.1, 0.01), 553u);
    uint64_t prev = 0;
    for (double t : {0.5, 0.1, 0.01, 1e-3, 1e-6}) {
        uint64_t l = required_ell_decision(0.2, t);
        EXPECT_GE(l, prev);
        prev = l;
        EXPECT_LE(std::exp(-0.04 * l / 1.4), t * (1 + 1e-9));
    }
    EXPECT_THROW(required_ell_decision(0.0, 0.1), ContractViolation);
    EXPECT_THROW(required_ell_decision(0.6, 0.1), ContractViolation);
    EXPECT_THROW(required_ell_decision(0.1, 1.0), ContractViolation);
}
