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

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace perminv {

using Amplitude = std::complex<double>;

/// Norm tolerance for states and basis-exactness tolerance for relabelings.
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kBasisTolerance = 1e-12;
/// Dense simulation cap.
inline constexpr int kMaxQubits = 24;

/// A contiguous bit field [offset, offset + width) of a basis index.
struct Register {
    std::string name;
    int offset = 0;
    int width = 0;

    uint64_t mask() const {
        return width == 0 ? 0 : (((width >= 64) ? ~0ULL : ((1ULL << width) - 1)) << offset);
    }
    uint64_t extract(uint64_t index) const {
        return (index & mask()) >> offset;
    }
    uint64_t deposit(uint64_t index, uint64_t value) const {
        return (index & ~mask()) | ((value << offset) & mask());
    }
    uint64_t dimension() const {
        return 1ULL << width;
    }
};

/// Named, pairwise-disjoint registers over a qubit range. Immutable once built:
/// the derivation helpers return new layouts.
class RegisterLayout {
   public:
    RegisterLayout() = default;
    /// Packs registers consecutively from bit 0 in the order given.
    explicit RegisterLayout(std::vector<std::pair<std::string, int>> widths);
    /// Explicit placement; validates disjointness and containment in [0, num_qubits).
    RegisterLayout(std::vector<Register> registers, int num_qubits);

    int num_qubits() const {
        return num_qubits_;
    }
    const std::vector<Register> &registers() const {
        return registers_;
    }
    bool contains(std::string_view name) const;
    const Register &at(std::string_view name) const;

    /// Layout with an extra register placed above every existing qubit.
    RegisterLayout appended(std::string name, int width) const;

    /// Replaces register `name` with sub-registers covering the same bits,
    /// listed from the least significant part upwards.
    RegisterLayout split(std::string_view name, const std::vector<std::pair<std::string, int>> &parts) const;

   private:
    void validate() const;

    std::vector<Register> registers_;
    int num_qubits_ = 0;
};

/// A classical function [2^domain_bits] -> [2^codomain_bits] given by its table.
class ClassicalFunctionTable {
   public:
    ClassicalFunctionTable() = default;
    ClassicalFunctionTable(int domain_bits, int codomain_bits, std::vector<uint64_t> table);
    static ClassicalFunctionTable constant(int domain_bits, int codomain_bits, uint64_t value);

    int domain_bits() const {
        return domain_bits_;
    }
    int codomain_bits() const {
        return codomain_bits_;
    }
    uint64_t operator()(uint64_t x) const {
        return table_[x];
    }
    std::span<const uint64_t> table() const {
        return table_;
    }
    friend bool operator==(const ClassicalFunctionTable &, const ClassicalFunctionTable &) = default;

   private:
    int domain_bits_ = 0;
    int codomain_bits_ = 0;
    std::vector<uint64_t> table_;
};

/// Dense amplitude vector over 2^num_qubits basis states; qubit k is bit k of
/// the basis index.
class StateVector {
   public:
    /// |0...0>.
    explicit StateVector(int num_qubits);
    static StateVector basis(int num_qubits, uint64_t index);
    /// Length must be a power of two and the vector normalized within kNormTolerance.
    static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

    int num_qubits() const {
        return num_qubits_;
    }
    uint64_t size() const {
        return amplitudes_.size();
    }
    std::span<Amplitude> amplitudes() {
        return amplitudes_;
    }
    std::span<const Amplitude> amplitudes() const {
        return amplitudes_;
    }
    Amplitude &operator[](uint64_t index) {
        return amplitudes_[index];
    }
    const Amplitude &operator[](uint64_t index) const {
        return amplitudes_[index];
    }
    double norm() const;

    /// Applies a bijection of basis labels: the amplitude at i moves to relabel(i).
    /// Labels with zero amplitude are skipped; two nonzero amplitudes landing on
    /// the same label raise ContractViolation.
    template <typename F>
    void relabel(F &&relabel_fn);

   private:
    StateVector() = default;
    void collision(uint64_t target) const;

    int num_qubits_ = 0;
    std::vector<Amplitude> amplitudes_;
    std::vector<Amplitude> scratch_;
    std::vector<uint8_t> written_;
};

template <typename F>
void StateVector::relabel(F &&relabel_fn) {
    uint64_t n = amplitudes_.size();
    scratch_.assign(n, Amplitude{});
    written_.assign(n, 0);
    for (uint64_t i = 0; i < n; i++) {
        const Amplitude &a = amplitudes_[i];
        if (a.real() == 0 && a.imag() == 0) {
            continue;
        }
        uint64_t j = relabel_fn(i);
        if (j >= n || written_[j]) {
            collision(j);
        }
        written_[j] = 1;
        scratch_[j] = a;
    }
    amplitudes_.swap(scratch_);
}

// ---- basis-label maps -------------------------------------------------------
// Each helper returns the image of one basis label under a classical
// reversible gate. The statevector operations below are these maps applied to
// every label; circuit-path oracles compose them directly on labels.

/// |x>_in |z>_out -> |x>_in |z xor f(x)>_out.
inline uint64_t xor_oracle_label(uint64_t index, const ClassicalFunctionTable &f, const Register &in, const Register &out) {
    return out.deposit(index, out.extract(index) ^ f(in.extract(index)));
}

/// dst ^= src when the 1-bit control register is set.
inline uint64_t controlled_xor_label(uint64_t index, const Register &control, const Register &src, const Register &dst) {
    if (control.extract(index) == 0) {
        return index;
    }
    return dst.deposit(index, dst.extract(index) ^ src.extract(index));
}

inline uint64_t xor_constant_label(uint64_t index, const Register &reg, uint64_t value) {
    return reg.deposit(index, reg.extract(index) ^ value);
}

inline uint64_t swap_bits_label(uint64_t index, const Register &reg, int a, int b) {
    uint64_t bit_a = (index >> (reg.offset + a)) & 1;
    uint64_t bit_b = (index >> (reg.offset + b)) & 1;
    if (bit_a == bit_b) {
        return index;
    }
    return index ^ (1ULL << (reg.offset + a)) ^ (1ULL << (reg.offset + b));
}

// ---- state operations --------------------------------------------------------

/// O_f on (in_reg, out_reg). Widths must match f; registers must be disjoint.
void apply_xor_oracle(
    StateVector &state,
    const RegisterLayout &layout,
    const ClassicalFunctionTable &f,
    std::string_view in_reg,
    std::string_view out_reg);

/// Exchanges bits a and b of `reg` in every basis label. swap(k, k) is the identity.
void apply_swap_bits(StateVector &state, const RegisterLayout &layout, std::string_view reg, int a, int b);

void apply_xor_constant(StateVector &state, const RegisterLayout &layout, std::string_view reg, uint64_t value);

void apply_controlled_xor(
    StateVector &state,
    const RegisterLayout &layout,
    std::string_view control,
    std::string_view src,
    std::string_view dst);

void apply_hadamard(StateVector &state, int qubit);
void apply_hadamard(StateVector &state, const RegisterLayout &layout, std::string_view reg);
void apply_ry(StateVector &state, int qubit, double angle);

/// Reflection 2|u><u| - I about the uniform superposition of `reg`, acting
/// independently on every configuration of the remaining qubits.
void apply_diffusion(StateVector &state, const RegisterLayout &layout, std::string_view reg);

/// Marginal measurement distribution of `reg`, indexed by register value.
std::vector<double> outcome_distribution(const StateVector &state, const RegisterLayout &layout, std::string_view reg);

/// ||Pi_S psi||^2 where S is a set of values of `reg` given as an indicator
/// over the register's 2^width values.
double projector_mass(
    const StateVector &state, const RegisterLayout &layout, std::string_view reg, const std::vector<bool> &subset);
/// Same with S given as a list of values.
double projector_mass(
    const StateVector &state, const RegisterLayout &layout, std::string_view reg, std::span<const uint64_t> subset);

double euclidean_distance(const StateVector &a, const StateVector &b);

}  // namespace perminv
