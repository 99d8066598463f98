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

#include "perminv/statevector.h"

#include <cmath>

#include "gtest/gtest.h"
#include "perminv/errors.h"
#include "test_util.h"

using namespace perminv;
using perminv::testing::max_deviation;
using perminv::testing::random_state;

namespace {

RegisterLayout xz(int n) {
    return RegisterLayout({{"x", n}, {"z", n}});
}

ClassicalFunctionTable random_function(int in_bits, int out_bits, uint64_t seed) {
    Rng rng(seed);
    std::vector<uint64_t> table(1ULL << in_bits);
    for (auto &v : table) {
        v = rng.uniform_below(1ULL << out_bits);
    }
    return ClassicalFunctionTable(in_bits, out_bits, table);
}

}  // namespace

TEST(register_layout, rejects_overlap_and_range) {
    EXPECT_THROW(RegisterLayout({Register{"a", 0, 3}, Register{"b", 2, 2}}, 4), ContractViolation);
    EXPECT_THROW(RegisterLayout({Register{"a", 0, 3}}, 2), ContractViolation);
    EXPECT_THROW(RegisterLayout({Register{"a", 0, 1}, Register{"a", 1, 1}}, 2), ContractViolation);
    RegisterLayout ok({Register{"a", 0, 2}, Register{"b", 3, 1}}, 4);
    EXPECT_EQ(ok.at("b").offset, 3);
    EXPECT_THROW(ok.at("c"), ContractViolation);
}

TEST(register_layout, appended_and_split) {
    auto layout = xz(3).appended("anc", 1);
    EXPECT_EQ(layout.num_qubits(), 7);
    EXPECT_EQ(layout.at("anc").offset, 6);
    auto parts = layout.split("x", {{"lo", 1}, {"hi", 2}});
    EXPECT_EQ(parts.at("lo").offset, 0);
    EXPECT_EQ(parts.at("hi").offset, 1);
    EXPECT_FALSE(parts.contains("x"));
    EXPECT_THROW(layout.split("x", {{"lo", 1}}), ContractViolation);
}

TEST(classical_function_table, rejects_wide_outputs) {
    EXPECT_THROW(ClassicalFunctionTable(1, 1, {0, 2}), ContractViolation);
    EXPECT_THROW(ClassicalFunctionTable(2, 1, {0, 1}), ContractViolation);
}

TEST(state_vector, normalization_enforced) {
    EXPECT_THROW(StateVector::from_amplitudes({1.0, 1.0}), ContractViolation);
    EXPECT_THROW(StateVector::from_amplitudes({1.0, 0.0, 0.0}), ContractViolation);
    EXPECT_NO_THROW(StateVector::from_amplitudes({M_SQRT1_2, M_SQRT1_2}));
}

TEST(apply_xor_oracle, examples) {
    auto layout = xz(1);
    auto s = random_state(2, 1);
    auto copy = s;
    apply_xor_oracle(s, layout, ClassicalFunctionTable::constant(1, 1, 0), "x", "z");
    EXPECT_LT(max_deviation(s, copy), 1e-15);

    auto basis = StateVector::basis(2, 0);
    apply_xor_oracle(basis, layout, ClassicalFunctionTable(1, 1, {1, 0}), "x", "z");
    EXPECT_EQ(basis[0b10], Amplitude(1));
}

TEST(apply_xor_oracle, contract_errors) {
    auto layout = xz(2);
    StateVector s(4);
    EXPECT_THROW(apply_xor_oracle(s, layout, ClassicalFunctionTable::constant(1, 2, 0), "x", "z"), ContractViolation);
    EXPECT_THROW(apply_xor_oracle(s, layout, ClassicalFunctionTable::constant(2, 2, 0), "x", "x"), ContractViolation);
}

TEST(apply_xor_oracle, involution_on_random_states) {
    for (uint64_t t = 0; t < 100; t++) {
        int n = 1 + static_cast<int>(t % 5);
        auto layout = xz(n);
        auto f = random_function(n, n, 1000 + t);
        auto s = random_state(2 * n, t);
        auto orig = s;
        apply_xor_oracle(s, layout, f, "x", "z");
        EXPECT_NEAR(s.norm(), 1.0, 1e-9);
        apply_xor_oracle(s, layout, f, "x", "z");
        EXPECT_LT(max_deviation(s, orig), 1e-12);
    }
}

TEST(apply_swap_bits, examples) {
    RegisterLayout layout({{"w", 2}});
    auto s = StateVector::basis(2, 0b01);
    apply_swap_bits(s, layout, "w", 0, 1);
    EXPECT_EQ(s[0b10], Amplitude(1));
    auto r = random_state(2, 5);
    auto copy = r;
    apply_swap_bits(r, layout, "w", 1, 1);
    EXPECT_LT(max_deviation(r, copy), 1e-15);
    EXPECT_THROW(apply_swap_bits(r, layout, "w", 0, 2), ContractViolation);

    StateVector u(2);
    apply_hadamard(u, layout, "w");
    auto uc = u;
    apply_swap_bits(u, layout, "w", 0, 1);
    EXPECT_LT(max_deviation(u, uc), 1e-15);
}

TEST(state_ops, norm_preservation_on_random_states) {
    for (uint64_t t = 0; t < 100; t++) {
        int n = 2 + static_cast<int>(t % 9);
        RegisterLayout layout({{"a", n / 2}, {"b", n - n / 2}});
        auto s = random_state(n, 77 + t);
        apply_hadamard(s, static_cast<int>(t % n));
        EXPECT_NEAR(s.norm(), 1.0, 1e-9);
        apply_ry(s, static_cast<int>((t + 1) % n), 0.3 * static_cast<double>(t));
        EXPECT_NEAR(s.norm(), 1.0, 1e-9);
        apply_diffusion(s, layout, "b");
        EXPECT_NEAR(s.norm(), 1.0, 1e-9);
        apply_swap_bits(s, layout, "b", 0, (n - n / 2) - 1);
        EXPECT_NEAR(s.norm(), 1.0, 1e-9);
        apply_xor_constant(s, layout, "a", 1);
        EXPECT_NEAR(s.norm(), 1.0, 1e-9);
    }
}

TEST(state_ops, linearity) {
    RegisterLayout layout({{"x", 3}, {"z", 3}});
    auto f = random_function(3, 3, 9);
    for (uint64_t t = 0; t < 20; t++) {
        auto s1 = random_state(6, 2 * t);
        auto s2 = random_state(6, 2 * t + 1);
        Amplitude alpha(0.6, 0.2), beta(-0.3, 0.5);
        std::vector<Amplitude> combo(s1.size());
        for (uint64_t i = 0; i < combo.size(); i++) {
            combo[i] = alpha * s1[i] + beta * s2[i];
        }
        double nrm = 0;
        for (auto &a : combo) {
            nrm += std::norm(a);
        }
        nrm = std::sqrt(nrm);
        for (auto &a : combo) {
            a /= nrm;
        }
        auto c = StateVector::from_amplitudes(combo);
        auto ops = [&](StateVector &s) {
            apply_xor_oracle(s, layout, f, "x", "z");
            apply_hadamard(s, 1);
            apply_diffusion(s, layout, "x");
            apply_swap_bits(s, layout, "z", 0, 2);
            apply_ry(s, 4, 0.7);
        };
        ops(s1);
        ops(s2);
        ops(c);
        for (uint64_t i = 0; i < c.size(); i++) {
            EXPECT_LT(std::abs(c[i] - (alpha * s1[i] + beta * s2[i]) / nrm), 1e-10);
        }
    }
}

TEST(outcome_distribution, examples) {
    RegisterLayout layout({{"a", 2}, {"b", 1}});
    auto s = StateVector::basis(3, 0b110);
    auto d = outcome_distribution(s, layout, "a");
    EXPECT_DOUBLE_EQ(d[2], 1.0);
    StateVector u(3);
    apply_hadamard(u, layout, "a");
    auto du = outcome_distribution(u, layout, "a");
    for (double p : du) {
        EXPECT_NEAR(p, 0.25, 1e-12);
    }
}

TEST(outcome_distribution, grover_closed_form) {
    // Marked item 11 of 16, phase oracle by hand; independent of the inverter code.
    RegisterLayout layout({{"w", 4}});
    for (int k = 0; k <= 3; k++) {
        StateVector s(4);
        apply_hadamard(s, layout, "w");
        for (int it = 0; it < k; it++) {
            s[11] = -s[11];
            apply_diffusion(s, layout, "w");
        }
        double expect = std::pow(std::sin((2 * k + 1) * std::asin(0.25)), 2);
        EXPECT_NEAR(outcome_distribution(s, layout, "w")[11], expect, 1e-12);
    }
}

TEST(projector_mass, examples) {
    RegisterLayout layout({{"w", 2}, {"z", 1}});
    auto s = random_state(3, 3);
    EXPECT_NEAR(projector_mass(s, layout, "w", std::vector<bool>(4, true)), 1.0, 1e-12);
    EXPECT_EQ(projector_mass(s, layout, "w", std::vector<bool>(4, false)), 0.0);
    auto b = StateVector::basis(3, 3);
    std::vector<uint64_t> three{3};
    EXPECT_DOUBLE_EQ(projector_mass(b, layout, "w", three), 1.0);
    std::vector<uint64_t> bad{4};
    EXPECT_THROW(projector_mass(b, layout, "w", bad), ContractViolation);
}

TEST(euclidean_distance, examples) {
    auto s = random_state(3, 4);
    EXPECT_EQ(euclidean_distance(s, s), 0.0);
    EXPECT_NEAR(euclidean_distance(StateVector::basis(2, 0), StateVector::basis(2, 3)), std::sqrt(2.0), 1e-15);
    auto neg = s;
    for (auto &a : neg.amplitudes()) {
        a = -a;
    }
    EXPECT_NEAR(euclidean_distance(s, neg), 2.0, 1e-12);
    EXPECT_THROW(euclidean_distance(s, StateVector(2)), ContractViolation);
}
