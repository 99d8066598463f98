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
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "perminv/inverter.h"
#include "perminv/permutation.h"
#include "perminv/random.h"

namespace perminv {

using BigInt = boost::multiprecision::cpp_int;

// ---- combinatorics -------------------------------------------------------------

/// Bits needed to write any rank below `count` (0 when count <= 1).
uint64_t bits_for_count(const BigInt &count);

/// N! / (N - length)!: ordered selections of `length` distinct values from [N].
BigInt arrangement_count(uint64_t universe, uint64_t length);
/// Mixed-radix rank of a sequence of distinct values from [universe]: digit i
/// is the position of values[i] among the still unused values (radix N - i).
BigInt rank_arrangement(const std::vector<uint64_t> &values, uint64_t universe);
std::vector<uint64_t> unrank_arrangement(const BigInt &rank, uint64_t universe, uint64_t length);

BigInt binomial(uint64_t n, uint64_t k);
/// Colexicographic rank of a strictly increasing index set: sum C(c_i, i + 1).
BigInt rank_combination(const std::vector<uint64_t> &sorted_indices);
std::vector<uint64_t> unrank_combination(const BigInt &rank, uint64_t k);

// ---- scheme --------------------------------------------------------------------

struct QracParams {
    double gamma = 0.1;
    double c = 0.1;
    uint64_t rho_copies = 1;
    InverterSpec inverter;
    /// Fraction of (pi, y) the inverter inverts with probability >= 2/3 over r,
    /// measured beforehand (see measure_inverted_fraction).
    double epsilon = 0;
    /// r streams used to estimate Pr_r[success | pi, x].
    uint64_t r_samples = 8;
    /// Replaces gamma / T^2 as the inclusion probability of R.
    std::optional<double> inclusion_probability;
    int threads = 1;

    void validate() const;
    /// max(T, 1); a query-free inverter is treated as T = 1.
    uint64_t effective_T() const;
    double subset_probability() const;
    /// (eps gamma N / (4 T^2)) (1 - 5 gamma^2 / c).
    double case2_threshold() const;
};

/// ceil(constant * ln N).
uint64_t default_rho(int n_bits, double constant = 25.0);

/// Each element of [2^n] independently with probability gamma / T^2.
std::vector<uint64_t> sample_subset_R(int n_bits, uint64_t T, double gamma, const Coins &coins);
std::vector<uint64_t> sample_subset_with_probability(int n_bits, double probability, const Coins &coins);

/// Probe subsets for a challenge preimage x: Sigma0 = R \ {x} on the forward
/// query register, Sigma1 = pi(R) \ {pi(x)} on the value bits of the inverse
/// query register (either flag).
struct MagnitudeSets {
    std::vector<bool> sigma0;
    std::vector<bool> sigma1;
};
MagnitudeSets magnitude_sets(const Permutation &perm, const std::vector<uint64_t> &subset, uint64_t x);

/// q(A, Sigma0 ∪ Sigma1) of one phase-1 run on y = pi(x) with coins r.
double good_set_magnitude(
    const Permutation &perm, const InverterSpec &inv, const std::vector<uint64_t> &subset, uint64_t x, const Coins &r);

struct GoodSet {
    std::vector<double> success;      // Pr_r[success | x] for every x
    std::vector<uint64_t> inverted;   // I
    std::vector<uint64_t> candidates; // R ∩ I
    std::vector<double> magnitude;    // q for each candidate
    std::vector<uint64_t> good;       // G
};

/// G = {x in R ∩ I : q <= c / T}. I is estimated over `r_samples` streams
/// keyed by `success_seed`; q is measured on the run with coins r.
GoodSet good_set_G(const Permutation &perm, const InverterSpec &inv, const std::vector<uint64_t> &subset, double c,
    const Coins &r, uint64_t r_samples, uint64_t success_seed, int threads = 1);

/// Fraction of (pi, y) over `perm_samples` seeded permutations and every y
/// with Pr_r[success] >= 2/3.
double measure_inverted_fraction(
    const InverterSpec &inv, uint64_t perm_samples, uint64_t r_samples, uint64_t seed, int threads = 1);

struct QracEncoding {
    int case_flag = 1;
    int n_bits = 0;
    /// Flag bit (0 for case 1, 1 for case 2) followed by the case fields:
    /// case 1: rank of the inverse table;
    /// case 2: |G| - 1 on n bits, rank of G within R, rank of pi outside G.
    std::vector<bool> classical;
    std::vector<Advice> advice_copies;
    uint64_t length_bits = 0;

    // Encoder-side diagnostics; not part of the payload.
    uint64_t subset_size = 0;
    uint64_t inverted_size = 0;
    uint64_t good_size = 0;
    bool in_X = false;
    double threshold = 0;
    std::vector<uint64_t> good_set;
};

/// The closed-form length of an encoding.
uint64_t qrac_length_formula(
    int case_flag, int n_bits, uint64_t subset_size, uint64_t good_size, uint64_t rho, uint64_t advice_qubits);
/// Length recomputed from the payload: classical bits plus advice qubits.
uint64_t payload_length_bits(const QracEncoding &enc);

/// R is split into: r = R.sub(0), the subset coins R.sub(1), the success
/// estimate seed R.sub(2), decoder measurements R.sub(3).
QracEncoding encode(const Permutation &perm, const QracParams &params, const Coins &R);

/// pi^{-1}(y) from the encoding. `nonce` keys the decoder's measurement draws.
uint64_t decode(const QracEncoding &enc, uint64_t y, const QracParams &params, const Coins &R, uint64_t nonce = 0);

/// The decode oracle pi-bar for a known permutation and good set.
QracDecodeOracle decode_oracle_for(const Permutation &perm, const std::vector<uint64_t> &good, uint64_t y);

/// ||Psi_{pi, y} - Psi_{pi-bar, y}|| for y = pi(x) with x in G. Needs an
/// inverter that reports its final state.
double linkage_distance(
    const Permutation &perm, const InverterSpec &inv, const std::vector<uint64_t> &good, uint64_t x, const Coins &r);

/// Framed layout: "PQRC", n_bits (u8), classical bit count (u32), copy count
/// (u32), classical bits MSB first padded to a byte, then per copy the qubit
/// count (u32) and its basis bits padded to a byte. All integers big-endian.
/// Throws ContractViolation for advice that is not a classical basis state.
std::vector<uint8_t> serialize_encoding(const QracEncoding &enc);
/// Throws DecodeError on malformed input.
QracEncoding deserialize_encoding(const std::vector<uint8_t> &bytes);

}  // namespace perminv
