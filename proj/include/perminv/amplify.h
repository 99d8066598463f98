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
#include <memory>
#include <vector>

#include "perminv/inverter.h"
#include "perminv/oracle.h"

namespace perminv {

/// One repetition's conjugating pair. In decision mode sigma2 flips the first
/// (most significant) bit iff `flip` is set.
struct Conjugators {
    std::shared_ptr<const Permutation> sigma1;
    std::shared_ptr<const Permutation> sigma2;
    uint64_t flip = 0;
};

/// The randomness layout of an l-fold repetition: r is parsed into 2l
/// substreams, r.sub(i) keying the conjugators of repetition i and
/// r.sub(l + i) being the base inverter's own randomness in repetition i.
struct RepetitionPlan {
    int ell = 0;
    std::vector<Coins> per_iteration_seeds;
    std::vector<Conjugators> conjugators;
};

RepetitionPlan make_repetition_plan(int n_bits, int ell, const Coins &r, InverterKind kind);

/// l-fold repetition of a search inverter with forward verification.
/// S' = l S, T' = l (T + 1). On total failure the output is 0.
InverterSpec amplify_search(const InverterSpec &base, int ell, OracleMode mode = OracleMode::functional);

/// ceil(ln 10 / epsilon).
int restricted_ell(double epsilon);

struct RestrictedAmplification {
    InverterSpec inverter;
    int ell = 0;
    /// l (T + 1): what the repetition protocol actually spends.
    uint64_t queries_protocol = 0;
    /// (l + 1) T: the alternative count quoted for the same construction.
    uint64_t queries_alternative = 0;
    /// Target property: Pr_{pi,y}[Pr_r[success] >= success_level] >= pair_fraction.
    double success_level = 2.0 / 3.0;
    double pair_fraction = 0.2;
};

RestrictedAmplification amplify_search_restricted(
    const InverterSpec &base, double epsilon, OracleMode mode = OracleMode::functional);

/// l-fold repetition of a decision inverter with a majority vote over the
/// un-flipped answers (ties go to 0). S' = l S, T' = l T.
InverterSpec amplify_decision(const InverterSpec &base, int ell, OracleMode mode = OracleMode::functional);

/// Pr[more than half of independent bits are 1] given Pr[bit i = 1] = q[i].
double majority_one_probability(const std::vector<double> &q);

/// Smallest l with exp(-delta^2 l / (1 + 2 delta)) <= target_failure.
uint64_t required_ell_decision(double delta, double target_failure);

}  // namespace perminv
