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
#include <vector>

#include "perminv/amplify.h"
#include "perminv/inverter.h"
#include "perminv/oracle.h"

namespace perminv {

/// Recovers each bit of the preimage with a majority-amplified decision
/// inverter run against pi ∘ swap_{0,j}. S' = n l S, T' = n l T.
InverterSpec search_from_decision(const InverterSpec &dpi, int ell, OracleMode mode = OracleMode::functional);

/// swap_{0,j} as a permutation of n-bit strings.
Permutation swap_permutation(int n_bits, int position);

/// A UNIQUESEARCH instance on domain_bits input bits.
struct UniqueSearchInstance {
    int domain_bits = 0;
    std::optional<uint64_t> marked;

    FunctionOracle oracle() const;
    bool is_yes() const {
        return marked.has_value();
    }
};

struct UniqueSearchRun {
    /// The reduction's answer: true means YES.
    bool yes = false;
    uint64_t f_queries = 0;
    uint64_t h_queries = 0;
    uint64_t query_budget = 0;
    uint64_t case_bit = 0;
    uint64_t suffix = 0;
};

/// Decides a UNIQUESEARCH instance with an adaptive decision inverter on
/// n = domain_bits + m + 1 bits. Seeded: samples r, pi and s from `seed`.
UniqueSearchRun unique_search_from_adpi(
    const InverterSpec &adpi, const UniqueSearchInstance &instance, uint64_t seed,
    OracleMode mode = OracleMode::functional);

struct DistributionalError {
    double p0 = 0;    // NO instances answered YES
    double p1 = 0;    // YES instances answered NO
    double se0 = 0;   // binomial standard errors
    double se1 = 0;
    uint64_t trials = 0;
};

using UniqueSearchAlgorithm = std::function<bool(const UniqueSearchInstance &instance, uint64_t seed)>;

/// Runs `trials` NO and `trials` YES instances (cycling through each list)
/// with per-run seeds derived from `seed`.
DistributionalError measure_distributional_error(
    const UniqueSearchAlgorithm &algorithm,
    const std::vector<UniqueSearchInstance> &yes_instances,
    const std::vector<UniqueSearchInstance> &no_instances,
    uint64_t trials,
    uint64_t seed,
    int threads = 1);

}  // namespace perminv
