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

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "perminv/oracle.h"
#include "perminv/random.h"
#include "perminv/statevector.h"

namespace perminv::testing {

/// Haar-ish random state: independent Gaussian amplitudes, normalized.
inline StateVector random_state(int num_qubits, uint64_t seed) {
    Rng rng(seed);
    std::vector<Amplitude> amps(1ULL << num_qubits);
    double norm2 = 0;
    for (auto &a : amps) {
        // Box-Muller on our own uniform source keeps this platform independent.
        double u1 = 1.0 - rng.uniform01();
        double u2 = rng.uniform01();
        double r = std::sqrt(-2 * std::log(u1));
        a = {r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2)};
        norm2 += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(norm2);
    }
    return StateVector::from_amplitudes(std::move(amps));
}

inline double max_deviation(const StateVector &a, const StateVector &b) {
    double d = 0;
    for (uint64_t i = 0; i < a.size(); i++) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

/// sum_{k > threshold} C(n,k) p^k (1-p)^(n-k), summed in log space.
inline double binomial_upper_tail(int n, double p, int threshold) {
    double total = 0;
    for (int k = threshold + 1; k <= n; k++) {
        double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                    (n - k) * std::log1p(-p);
        total += std::exp(lg);
    }
    return total;
}

inline double binomial_pmf(int n, double p, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                    (n - k) * std::log1p(-p));
}

/// Majority-vote success of ell independent votes, each correct with
/// probability p, averaged over a uniform correct bit when ties go to 0.
inline double majority_success(int ell, double p) {
    double s = binomial_upper_tail(ell, p, ell / 2);
    if (ell % 2 == 0) {
        s += 0.5 * binomial_pmf(ell, p, ell / 2);
    }
    return s;
}

/// Columns of one oracle application on the (w, z) or (w||b, z||b') layout,
/// computed by querying every basis state. Returns the max deviation of
/// U^dagger U from the identity.
inline double oracle_unitarity_error(OracleHandle &oracle, Direction direction) {
    int width = oracle.n_bits() + (direction == Direction::inverse ? 1 : 0);
    RegisterLayout layout({{"w", width}, {"z", width}});
    uint64_t dim = 1ULL << (2 * width);
    std::vector<std::vector<Amplitude>> cols(dim);
    for (uint64_t b = 0; b < dim; b++) {
        auto s = StateVector::basis(2 * width, b);
        if (direction == Direction::forward) {
            oracle.forward_query(s, layout, "w", "z");
        } else {
            oracle.inverse_query(s, layout, "w", "z");
        }
        cols[b].assign(s.amplitudes().begin(), s.amplitudes().end());
    }
    double err = 0;
    for (uint64_t a = 0; a < dim; a++) {
        for (uint64_t b = 0; b < dim; b++) {
            Amplitude dot = 0;
            for (uint64_t k = 0; k < dim; k++) {
                dot += std::conj(cols[a][k]) * cols[b][k];
            }
            err = std::max(err, std::abs(dot - Amplitude(a == b ? 1.0 : 0.0)));
        }
    }
    return err;
}

/// Number of basis inputs on which one application disagrees with
/// z ^= value(w), over every (w, z) pair.
inline uint64_t oracle_definition_mismatches(OracleHandle &oracle, Direction direction) {
    int width = oracle.n_bits() + (direction == Direction::inverse ? 1 : 0);
    Register w{"w", 0, width};
    Register z{"z", width, width};
    int free_offset = 2 * width;
    uint64_t bad = 0;
    for (uint64_t b = 0; b < (1ULL << (2 * width)); b++) {
        uint64_t x = w.extract(b);
        uint64_t expect =
            z.deposit(b, z.extract(b) ^ (direction == Direction::forward ? oracle.forward_value(x) : oracle.inverse_value(x)));
        uint64_t got = direction == Direction::forward ? oracle.forward_label(b, w, z, free_offset)
                                                       : oracle.inverse_label(b, w, z, free_offset);
        bad += got != expect;
    }
    return bad;
}

}  // namespace perminv::testing
