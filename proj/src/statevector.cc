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

#include <algorithm>
#include <bit>
#include <cmath>

#include "perminv/errors.h"

namespace perminv {

namespace {

void check_qubit_count(int num_qubits) {
    if (num_qubits < 0 || num_qubits > kMaxQubits) {
        throw ContractViolation("qubit count " + std::to_string(num_qubits) + " outside [0, " +
                                std::to_string(kMaxQubits) + "]");
    }
}

void check_disjoint(const Register &a, const Register &b) {
    if ((a.mask() & b.mask()) != 0) {
        throw ContractViolation("registers '" + a.name + "' and '" + b.name + "' overlap");
    }
}

}  // namespace

RegisterLayout::RegisterLayout(std::vector<std::pair<std::string, int>> widths) {
    int offset = 0;
    for (auto &[name, width] : widths) {
        registers_.push_back(Register{std::move(name), offset, width});
        offset += width;
    }
    num_qubits_ = offset;
    validate();
}

RegisterLayout::RegisterLayout(std::vector<Register> registers, int num_qubits)
    : registers_(std::move(registers)), num_qubits_(num_qubits) {
    validate();
}

void RegisterLayout::validate() const {
    if (num_qubits_ < 0 || num_qubits_ > 62) {
        throw ContractViolation("layout spans an unsupported number of qubits");
    }
    for (size_t i = 0; i < registers_.size(); i++) {
        const Register &r = registers_[i];
        if (r.width < 0 || r.offset < 0 || r.offset + r.width > num_qubits_) {
            throw ContractViolation("register '" + r.name + "' lies outside [0, num_qubits)");
        }
        for (size_t j = 0; j < i; j++) {
            if (registers_[j].name == r.name) {
                throw ContractViolation("duplicate register name '" + r.name + "'");
            }
            check_disjoint(registers_[j], r);
        }
    }
}

bool RegisterLayout::contains(std::string_view name) const {
    return std::any_of(registers_.begin(), registers_.end(), [&](const Register &r) { return r.name == name; });
}

const Register &RegisterLayout::at(std::string_view name) const {
    for (const auto &r : registers_) {
        if (r.name == name) {
            return r;
        }
    }
    throw ContractViolation("unknown register '" + std::string(name) + "'");
}

RegisterLayout RegisterLayout::appended(std::string name, int width) const {
    auto regs = registers_;
    regs.push_back(Register{std::move(name), num_qubits_, width});
    return RegisterLayout(std::move(regs), num_qubits_ + width);
}

RegisterLayout RegisterLayout::split(
    std::string_view name, const std::vector<std::pair<std::string, int>> &parts) const {
    const Register &whole = at(name);
    int total = 0;
    for (const auto &p : parts) {
        total += p.second;
    }
    if (total != whole.width) {
        throw ContractViolation("split of '" + whole.name + "' does not cover its width");
    }
    std::vector<Register> regs;
    for (const auto &r : registers_) {
        if (r.name != whole.name) {
            regs.push_back(r);
        }
    }
    int offset = whole.offset;
    for (const auto &[part, width] : parts) {
        regs.push_back(Register{part, offset, width});
        offset += width;
    }
    return RegisterLayout(std::move(regs), num_qubits_);
}

ClassicalFunctionTable::ClassicalFunctionTable(int domain_bits, int codomain_bits, std::vector<uint64_t> table)
    : domain_bits_(domain_bits), codomain_bits_(codomain_bits), table_(std::move(table)) {
    if (domain_bits < 0 || domain_bits > 30 || codomain_bits < 0 || codomain_bits > 62) {
        throw ContractViolation("function table bit widths out of range");
    }
    if (table_.size() != (1ULL << domain_bits)) {
        throw ContractViolation("function table length must be 2^domain_bits");
    }
    uint64_t limit = 1ULL << codomain_bits;
    for (uint64_t v : table_) {
        if (v >= limit) {
            throw ContractViolation("function table output does not fit in codomain_bits");
        }
    }
}

ClassicalFunctionTable ClassicalFunctionTable::constant(int domain_bits, int codomain_bits, uint64_t value) {
    return ClassicalFunctionTable(domain_bits, codomain_bits, std::vector<uint64_t>(1ULL << domain_bits, value));
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    check_qubit_count(num_qubits);
    amplitudes_.assign(1ULL << num_qubits, Amplitude{});
    amplitudes_[0] = 1;
}

StateVector StateVector::basis(int num_qubits, uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.size()) {
        throw ContractViolation("basis index out of range");
    }
    s.amplitudes_[0] = 0;
    s.amplitudes_[index] = 1;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
    uint64_t n = amplitudes.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw ContractViolation("amplitude count must be a power of two");
    }
    StateVector s;
    s.num_qubits_ = std::countr_zero(n);
    check_qubit_count(s.num_qubits_);
    s.amplitudes_ = std::move(amplitudes);
    if (std::abs(s.norm() - 1) > kNormTolerance) {
        throw ContractViolation("state is not normalized");
    }
    return s;
}

double StateVector::norm() const {
    double total = 0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return std::sqrt(total);
}

void StateVector::collision(uint64_t target) const {
    throw ContractViolation("basis relabeling is not a bijection (label " + std::to_string(target) + ")");
}

void apply_xor_oracle(
    StateVector &state,
    const RegisterLayout &layout,
    const ClassicalFunctionTable &f,
    std::string_view in_reg,
    std::string_view out_reg) {
    const Register &in = layout.at(in_reg);
    const Register &out = layout.at(out_reg);
    if (in.width != f.domain_bits() || out.width != f.codomain_bits()) {
        throw ContractViolation("register widths do not match the function table");
    }
    check_disjoint(in, out);
    if (layout.num_qubits() > state.num_qubits()) {
        throw ContractViolation("layout is larger than the state");
    }
    state.relabel([&](uint64_t i) { return xor_oracle_label(i, f, in, out); });
}

void apply_swap_bits(StateVector &state, const RegisterLayout &layout, std::string_view reg, int a, int b) {
    const Register &r = layout.at(reg);
    if (a < 0 || b < 0 || a >= r.width || b >= r.width) {
        throw ContractViolation("swap bit index out of range for register '" + r.name + "'");
    }
    if (a == b) {
        return;
    }
    state.relabel([&](uint64_t i) { return swap_bits_label(i, r, a, b); });
}

void apply_xor_constant(StateVector &state, const RegisterLayout &layout, std::string_view reg, uint64_t value) {
    const Register &r = layout.at(reg);
    if (value >= r.dimension()) {
        throw ContractViolation("constant does not fit in register '" + r.name + "'");
    }
    state.relabel([&](uint64_t i) { return xor_constant_label(i, r, value); });
}

void apply_controlled_xor(
    StateVector &state,
    const RegisterLayout &layout,
    std::string_view control,
    std::string_view src,
    std::string_view dst) {
    const Register &c = layout.at(control);
    const Register &s = layout.at(src);
    const Register &d = layout.at(dst);
    if (c.width != 1 || s.width != d.width) {
        throw ContractViolation("controlled xor needs a 1-bit control and equal-width source and target");
    }
    check_disjoint(c, d);
    check_disjoint(s, d);
    state.relabel([&](uint64_t i) { return controlled_xor_label(i, c, s, d); });
}

void apply_hadamard(StateVector &state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits()) {
        throw ContractViolation("qubit index out of range");
    }
    auto amps = state.amplitudes();
    uint64_t bit = 1ULL << qubit;
    const double s = 1 / std::sqrt(2.0);
    for (uint64_t i = 0; i < amps.size(); i++) {
        if (i & bit) {
            continue;
        }
        Amplitude a = amps[i];
        Amplitude b = amps[i | bit];
        amps[i] = (a + b) * s;
        amps[i | bit] = (a - b) * s;
    }
}

void apply_hadamard(StateVector &state, const RegisterLayout &layout, std::string_view reg) {
    const Register &r = layout.at(reg);
    for (int k = 0; k < r.width; k++) {
        apply_hadamard(state, r.offset + k);
    }
}

void apply_ry(StateVector &state, int qubit, double angle) {
    if (qubit < 0 || qubit >= state.num_qubits()) {
        throw ContractViolation("qubit index out of range");
    }
    auto amps = state.amplitudes();
    uint64_t bit = 1ULL << qubit;
    double c = std::cos(angle / 2);
    double s = std::sin(angle / 2);
    for (uint64_t i = 0; i < amps.size(); i++) {
        if (i & bit) {
            continue;
        }
        Amplitude a = amps[i];
        Amplitude b = amps[i | bit];
        amps[i] = c * a - s * b;
        amps[i | bit] = s * a + c * b;
    }
}

void apply_diffusion(StateVector &state, const RegisterLayout &layout, std::string_view reg) {
    const Register &r = layout.at(reg);
    auto amps = state.amplitudes();
    uint64_t dim = r.dimension();
    uint64_t rest_mask = ~r.mask() & (amps.size() - 1);
    // Enumerate the other qubits' configurations as submasks of rest_mask.
    uint64_t rest = 0;
    while (true) {
        Amplitude mean = 0;
        for (uint64_t v = 0; v < dim; v++) {
            mean += amps[r.deposit(rest, v)];
        }
        mean /= static_cast<double>(dim);
        for (uint64_t v = 0; v < dim; v++) {
            Amplitude &a = amps[r.deposit(rest, v)];
            a = 2.0 * mean - a;
        }
        if (rest == rest_mask) {
            break;
        }
        rest = (rest - rest_mask) & rest_mask;
    }
}

std::vector<double> outcome_distribution(const StateVector &state, const RegisterLayout &layout, std::string_view reg) {
    const Register &r = layout.at(reg);
    std::vector<double> dist(r.dimension(), 0.0);
    auto amps = state.amplitudes();
    for (uint64_t i = 0; i < amps.size(); i++) {
        dist[r.extract(i)] += std::norm(amps[i]);
    }
    return dist;
}

double projector_mass(
    const StateVector &state, const RegisterLayout &layout, std::string_view reg, const std::vector<bool> &subset) {
    const Register &r = layout.at(reg);
    if (subset.size() != r.dimension()) {
        throw ContractViolation("subset indicator size does not match register '" + r.name + "'");
    }
    double mass = 0;
    auto amps = state.amplitudes();
    for (uint64_t i = 0; i < amps.size(); i++) {
        if (subset[r.extract(i)]) {
            mass += std::norm(amps[i]);
        }
    }
    return std::min(mass, 1.0);
}

double projector_mass(
    const StateVector &state, const RegisterLayout &layout, std::string_view reg, std::span<const uint64_t> subset) {
    const Register &r = layout.at(reg);
    std::vector<bool> indicator(r.dimension(), false);
    for (uint64_t v : subset) {
        if (v >= r.dimension()) {
            throw ContractViolation("subset value does not fit in register '" + r.name + "'");
        }
        indicator[v] = true;
    }
    return projector_mass(state, layout, reg, indicator);
}

double euclidean_distance(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw ContractViolation("euclidean_distance: dimension mismatch");
    }
    double total = 0;
    for (uint64_t i = 0; i < a.size(); i++) {
        total += std::norm(a[i] - b[i]);
    }
    return std::sqrt(total);
}

}  // namespace perminv
