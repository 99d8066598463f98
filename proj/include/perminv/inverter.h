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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perminv/oracle.h"
#include "perminv/permutation.h"
#include "perminv/random.h"
#include "perminv/statevector.h"

namespace perminv {

enum class InverterKind { search, decision };

/// Advice produced by phase 0. Baselines use classical basis-state advice
/// (`bits`); amplified inverters hold one part per repetition.
struct Advice {
    int qubits = 0;
    std::vector<bool> bits;
    std::vector<Advice> parts;
    bool classical = true;

    uint64_t total_qubits() const;
    bool is_classical() const;
};

struct Preparation {
    Advice advice;
    uint64_t mu = 0;
};

/// Result of one phase-1 run: the terminal measurement distribution of the
/// output register (2^{n-m} entries for search, 2 for decision).
struct InversionOutcome {
    std::vector<double> distribution;
    std::optional<StateVector> final_state;
    /// Amplified search only: probability that some repetition verified.
    std::optional<double> verified_probability;
};

using PrepareFn = std::function<Preparation(const Permutation &perm, const Coins &r)>;
using InvertFn = std::function<InversionOutcome(
    OracleHandle &oracle, const Advice &advice, uint64_t mu, uint64_t y, const Coins &r)>;

struct InverterSpec {
    std::string name;
    InverterKind kind = InverterKind::search;
    int n_bits = 0;
    int adaptive_bits = 0;
    uint64_t advice_qubits = 0;
    uint64_t query_budget = 0;
    PrepareFn prepare;
    InvertFn invert;

    /// Width of the output register.
    int output_bits() const {
        return kind == InverterKind::search ? n_bits - adaptive_bits : 1;
    }
    void validate() const;
};

/// Where synthetic inverters draw their designed success event from.
enum class BiasSource { measurement, shared_randomness };

/// Grover search with a compare-and-kickback marker: 2 forward queries per
/// iteration, S = 0, T = 2k.
InverterSpec grover_spi(int n_bits, int iterations);

/// Classical advice holding ceil(fraction * N) inverse-table entries chosen by r.
InverterSpec lookup_spi(int n_bits, double known_fraction);

/// Entire inverse table as advice; S = N * n, T = 0.
InverterSpec full_table_spi(int n_bits);
/// Always outputs 0.
InverterSpec constant_spi(int n_bits);

/// MSB of every preimage as advice; S = N, T = 0.
InverterSpec full_table_dpi(int n_bits);
InverterSpec constant_dpi(int n_bits, uint64_t bit = 0);

/// Outputs the correct preimage with probability epsilon and a wrong one
/// otherwise, independently of everything but its own r. Carries the inverse
/// table of the permutation it is prepared for (S = N * n) and spends its
/// T queries on dummy forward queries.
InverterSpec synthetic_spi(int n_bits, double epsilon, uint64_t dummy_queries, BiasSource source);
/// Decision analogue with success 1/2 + delta.
InverterSpec synthetic_dpi(int n_bits, double delta, uint64_t dummy_queries, BiasSource source);

/// Zero-advice adaptive decision inverter: phase 0 picks mu from r; phase 1
/// scans x || mu in increasing x with classical forward queries and reports
/// the first bit of the first hit. T = 2^{n-m}.
InverterSpec exhaustive_adpi(int n_bits, int adaptive_bits);

struct EvalMode {
    enum class Kind { exact, sampled };
    Kind kind = Kind::exact;
    uint64_t seed = 0;
    /// Sampled: number of (pi, r, x) trials, output sampled from the distribution.
    uint64_t trials = 0;
    /// Exact: seeded permutations and r streams, exact over every x.
    uint64_t perm_samples = 1;
    uint64_t r_samples = 1;
    /// Exact: enumerate every permutation instead of sampling (n <= 3).
    bool enumerate_permutations = false;
    int threads = 1;
};

struct ExperimentResult {
    double success_probability = 0;
    EvalMode::Kind mode = EvalMode::Kind::exact;
    uint64_t trials = 0;
    /// Number of (pi, r) configurations averaged in exact mode.
    uint64_t configurations = 0;
    uint64_t queries_used = 0;
    uint64_t oracle_calls = 0;
    uint64_t advice_qubits_used = 0;
    uint64_t seed = 0;
    /// Standard error over trials (sampled) or configurations (exact).
    double std_error = 0;
    /// Mean verified probability when the inverter reports one.
    std::optional<double> verified_probability;
};

/// Phase-0 + phase-1 for one (pi, r, x) with y = pi(x || mu). Checks S and T.
struct SingleRun {
    InversionOutcome outcome;
    uint64_t preimage = 0;     // x || mu
    uint64_t answer = 0;       // expected output value
    uint64_t queries = 0;
    uint64_t oracle_calls = 0;
    uint64_t advice_qubits = 0;
    double success = 0;        // distribution mass on the answer
};
SingleRun run_single(const InverterSpec &inv, const Permutation &perm, const Coins &r, uint64_t x);
/// Same with a phase-0 result computed once and shared across x.
SingleRun run_single(
    const InverterSpec &inv, const Permutation &perm, const Coins &r, const Preparation &prep, uint64_t x);

ExperimentResult run_search_experiment(const InverterSpec &inv, const EvalMode &mode);
ExperimentResult run_decision_experiment(const InverterSpec &inv, const EvalMode &mode);

/// Pr_r[success | pi, x] for every x in [2^{n-m}], averaged over r_samples
/// streams r = Coins{seed}.sub(k).
std::vector<double> per_preimage_success(
    const InverterSpec &inv, const Permutation &perm, uint64_t r_samples, uint64_t seed, int threads = 1);

/// Index drawn from a probability vector.
uint64_t sample_index(const std::vector<double> &distribution, Rng &rng);

}  // namespace perminv
