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
#include <vector>

#include "perminv/oracle.h"
#include "perminv/statevector.h"

namespace perminv {

enum class TailKind { chernoff, chernoff_majority, reverse_markov };

/// A probability bound. `raw_value` is the formula's value; `bound_value`
/// is the same clamped to [0, 1].
struct TailBound {
    TailKind kind = TailKind::chernoff;
    std::vector<double> parameters;
    double raw_value = 0;
    double bound_value = 0;
};

/// Pr[X < (1 - delta) n p] <= 2 exp(-delta^2 n p / 2) for X ~ Bin(n, p).
TailBound chernoff_lower_tail(uint64_t n, double p, double delta);

/// Pr[X <= n/2] <= exp(-n (p - 1/2)^2 / (2 p)) for X ~ Bin(n, p).
TailBound chernoff_majority_tail(uint64_t n, double p);

/// Pr[X >= theta] >= max(0, (E[X] - theta) / (1 - theta)) for X in [0, 1].
TailBound reverse_markov(double expectation, double theta);

/// {x : p_x >= theta * epsilon}. Requires mean(p) >= epsilon; the result has
/// at least (1 - theta) * epsilon * |X| elements.
std::vector<uint64_t> averaging_subset(const std::vector<double> &success_table, double epsilon, double theta);

/// A query algorithm on registers w (n), z (n) and `work` ancillas: a list of
/// forward queries O_f(w, z) interleaved with fixed gates.
struct QueryCircuit {
    enum class Op { query, hadamard, ry, swap, xor_constant };
    struct Step {
        Op op = Op::query;
        int a = 0;          // qubit (hadamard, ry) or bit of w (swap)
        int b = 0;          // second bit of w (swap)
        double angle = 0;   // ry
        uint64_t value = 0; // xor_constant into w
    };

    int n_bits = 0;
    int work_qubits = 1;
    std::vector<Step> steps;

    RegisterLayout layout() const;
    uint64_t query_count() const;
    /// Runs from |0...0> against `oracle`.
    StateVector run(OracleHandle &oracle) const;
};

/// Seeded random circuit with exactly `queries` oracle calls.
QueryCircuit random_query_circuit(int n_bits, int queries, uint64_t seed);

struct SwappingReport {
    double distance = 0;
    double magnitude = 0;          // q(A^f, S)
    double bound = 0;              // sqrt(T q)
    bool holds = false;            // distance <= sqrt(T q)
    /// 2 sqrt(T q): what the hybrid argument gives for XOR oracles, where one
    /// query can move a state in S to an orthogonal one.
    double hybrid_bound = 0;
    bool holds_hybrid = false;
    /// distance / bound (0 when both vanish).
    double tightness = 0;
};

/// Runs the algorithm against f with a probe on S = {x : f(x) != g(x)} and
/// against g, and compares the final-state distance with sqrt(T q).
SwappingReport swapping_check(
    const QueryCircuit &algorithm, const ClassicalFunctionTable &f, const ClassicalFunctionTable &g, uint64_t T);

}  // namespace perminv
