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
#include <random>

namespace perminv {

/// SplitMix64 finalizer. Used to derive independent substream seeds.
constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of substream `index` of the stream rooted at `seed`.
///
/// derive_seed(s, i) = splitmix64(splitmix64(s) ^ splitmix64(i + 0x632BE59BD9B4E019)).
/// Substreams of distinct indices are treated as independent; nesting
/// (derive_seed(derive_seed(s, i), j)) gives a tree of streams, so every trial
/// of an experiment can be keyed by (seed, trial_index) regardless of how
/// trials are scheduled across threads.
constexpr uint64_t derive_seed(uint64_t seed, uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Deterministic generator. The engine is std::mt19937_64 (bit-exact by the
/// standard); bounded integers and reals are derived here rather than through
/// <random> distributions, whose outputs differ between standard libraries.
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {
    }

    uint64_t next() {
        return engine_();
    }

    /// Uniform integer in [0, bound) by rejection; bound must be positive.
    uint64_t uniform_below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        while (true) {
            uint64_t r = engine_();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        return uniform01() < p;
    }

    bool coin() {
        return (engine_() >> 63) != 0;
    }

   private:
    std::mt19937_64 engine_;
};

/// A shared-randomness string r, realized as the root of a seeded stream tree.
/// Phase 0 and phase 1 of an inverter receive the same Coins and therefore
/// see the same random string.
struct Coins {
    uint64_t seed = 0;

    Coins sub(uint64_t index) const {
        return Coins{derive_seed(seed, index)};
    }
    Rng rng() const {
        return Rng(seed);
    }
    friend bool operator==(const Coins &, const Coins &) = default;
};

}  // namespace perminv
