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

#include "perminv/oracle.h"

#include <string>

#include "perminv/errors.h"

namespace perminv {

namespace {

void check_clean(uint64_t index, int free_offset) {
    if (free_offset < 64 && (index >> free_offset) != 0) {
        throw ContractViolation("oracle circuit left an aux register dirty");
    }
}

void check_aux_room(int free_offset, int aux_qubits) {
    if (free_offset + aux_qubits > 62) {
        throw ContractViolation("not enough label bits for oracle aux registers");
    }
}

}  // namespace

uint64_t punctured_inverse_value(const Permutation &perm, uint64_t y, uint64_t wb) {
    uint64_t w = wb >> 1;
    if ((wb & 1) != 0 || w == y) {
        return reject_element(perm.n_bits());
    }
    return inverse_encoding(perm.inverse(w), 0);
}

uint64_t swap_positions(uint64_t value, int n_bits, int position) {
    if (position < 0 || position >= n_bits) {
        throw ContractViolation("swap position " + std::to_string(position) + " out of range");
    }
    int a = n_bits - 1;
    int b = n_bits - 1 - position;
    uint64_t bit_a = (value >> a) & 1;
    uint64_t bit_b = (value >> b) & 1;
    if (bit_a == bit_b) {
        return value;
    }
    return value ^ (1ULL << a) ^ (1ULL << b);
}

// ---- OracleHandle ------------------------------------------------------------

OracleHandle::OracleHandle(int n_bits) : n_bits_(n_bits) {
    if (n_bits < 1 || n_bits > 20) {
        throw ContractViolation("oracle n_bits must lie in [1, 20]");
    }
}

void OracleHandle::charge_logical() {
    if (budget_.has_value() && query_count_ >= *budget_) {
        throw BudgetExceeded(
            "query budget of " + std::to_string(*budget_) + " exhausted on an " + std::to_string(n_bits_) +
            "-bit oracle");
    }
}

void OracleHandle::charge_relayed(Direction direction, uint64_t calls) {
    charge_logical();
    on_query(direction, calls);
    query_count_++;
    oracle_calls_ += calls;
}

void OracleHandle::accrue(Direction direction, const StateVector &state, const Register &input) {
    for (auto &probe : probes_) {
        if (probe.direction != direction) {
            continue;
        }
        double mass = 0;
        auto amps = state.amplitudes();
        for (uint64_t i = 0; i < amps.size(); i++) {
            if (probe.subset[input.extract(i)]) {
                mass += std::norm(amps[i]);
            }
        }
        probe.mass += std::min(mass, 1.0);
    }
}

void OracleHandle::forward_query(
    StateVector &state, const RegisterLayout &layout, std::string_view w_reg, std::string_view z_reg) {
    const Register &w = layout.at(w_reg);
    const Register &z = layout.at(z_reg);
    if (w.width != n_bits_ || z.width != n_bits_) {
        throw ContractViolation("forward query registers must be " + std::to_string(n_bits_) + " bits wide");
    }
    if ((w.mask() & z.mask()) != 0 || layout.num_qubits() > state.num_qubits()) {
        throw ContractViolation("forward query registers overlap or exceed the state");
    }
    charge_logical();
    on_query(Direction::forward, 1);
    accrue(Direction::forward, state, w);
    query_count_++;
    oracle_calls_++;
    int free_offset = state.num_qubits();
    state.relabel([&](uint64_t i) {
        return forward_label(i, w, z, free_offset);
    });
}

void OracleHandle::inverse_query(
    StateVector &state, const RegisterLayout &layout, std::string_view wb_reg, std::string_view zb_reg) {
    const Register &wb = layout.at(wb_reg);
    const Register &zb = layout.at(zb_reg);
    if (wb.width != n_bits_ + 1 || zb.width != n_bits_ + 1) {
        throw ContractViolation("inverse query registers must be " + std::to_string(n_bits_ + 1) + " bits wide");
    }
    if ((wb.mask() & zb.mask()) != 0 || layout.num_qubits() > state.num_qubits()) {
        throw ContractViolation("inverse query registers overlap or exceed the state");
    }
    charge_logical();
    on_query(Direction::inverse, 1);
    accrue(Direction::inverse, state, wb);
    query_count_++;
    oracle_calls_++;
    int free_offset = state.num_qubits();
    state.relabel([&](uint64_t i) {
        return inverse_label(i, wb, zb, free_offset);
    });
}

uint64_t OracleHandle::forward_label(uint64_t index, const Register &w, const Register &z, int) const {
    return z.deposit(index, z.extract(index) ^ forward_value(w.extract(index)));
}

uint64_t OracleHandle::inverse_label(uint64_t index, const Register &wb, const Register &zb, int) const {
    return zb.deposit(index, zb.extract(index) ^ inverse_value(wb.extract(index)));
}

size_t OracleHandle::add_probe(Direction direction, std::vector<bool> subset) {
    if (query_count_ != 0) {
        throw ContractViolation("probes must be registered before the first query");
    }
    uint64_t expected = direction == Direction::forward ? domain_size() : 2 * domain_size();
    if (subset.size() != expected) {
        throw ContractViolation("probe subset has the wrong domain size");
    }
    probes_.push_back(MagnitudeProbe{direction, std::move(subset), 0.0});
    return probes_.size() - 1;
}

double total_query_magnitude(const OracleHandle &handle, size_t probe_id) {
    if (probe_id >= handle.probes().size()) {
        throw ContractViolation("unknown probe id " + std::to_string(probe_id));
    }
    return handle.probes()[probe_id].mass;
}

// ---- TwoSidedOracle ----------------------------------------------------------

TwoSidedOracle::TwoSidedOracle(std::shared_ptr<const Permutation> perm, uint64_t y)
    : OracleHandle(perm->n_bits()), perm_(std::move(perm)), y_(y) {
    if (y_ >= perm_->size()) {
        throw ContractViolation("punctured image outside [N]");
    }
    forward_ = std::make_shared<const ClassicalFunctionTable>(perm_->forward_function());
    std::vector<uint64_t> inv(2 * perm_->size());
    for (uint64_t wb = 0; wb < inv.size(); wb++) {
        inv[wb] = punctured_inverse_value(*perm_, y_, wb);
    }
    inverse_ = std::make_shared<const ClassicalFunctionTable>(n_bits() + 1, n_bits() + 1, std::move(inv));
}

TwoSidedOracle make_two_sided(const Permutation &perm, uint64_t y) {
    return TwoSidedOracle(std::make_shared<const Permutation>(perm), y);
}

TwoSidedOracle make_two_sided(std::shared_ptr<const Permutation> perm, uint64_t y) {
    return TwoSidedOracle(std::move(perm), y);
}

// ---- TableOracle -------------------------------------------------------------

TableOracle::TableOracle(ClassicalFunctionTable forward, std::optional<ClassicalFunctionTable> inverse)
    : OracleHandle(forward.domain_bits()), forward_(std::move(forward)), inverse_(std::move(inverse)) {
    if (forward_.codomain_bits() != n_bits()) {
        throw ContractViolation("table oracle must map n bits to n bits");
    }
    if (inverse_ && (inverse_->domain_bits() != n_bits() + 1 || inverse_->codomain_bits() != n_bits() + 1)) {
        throw ContractViolation("table oracle inverse must map n+1 bits to n+1 bits");
    }
}

// ---- ConjugatedOracle --------------------------------------------------------

ClassicalFunctionTable starred_inverse(const Permutation &sigma) {
    std::vector<uint64_t> table(2 * sigma.size());
    for (uint64_t wb = 0; wb < table.size(); wb++) {
        table[wb] = (wb & 1) ? wb : inverse_encoding(sigma.inverse(wb >> 1), 0);
    }
    return ClassicalFunctionTable(sigma.n_bits() + 1, sigma.n_bits() + 1, std::move(table));
}

ConjugatedOracle::ConjugatedOracle(
    std::shared_ptr<const Permutation> sigma1,
    std::shared_ptr<const Permutation> sigma2,
    OracleHandle &base,
    uint64_t y,
    OracleMode mode)
    : OracleHandle(base.n_bits()),
      sigma1_(std::move(sigma1)),
      sigma2_(std::move(sigma2)),
      base_(&base),
      y_(y),
      mode_(mode) {
    if (sigma1_->n_bits() != base.n_bits() || sigma2_->n_bits() != base.n_bits()) {
        throw ContractViolation("conjugators and base oracle disagree on n_bits");
    }
    if (y_ >= base.domain_size()) {
        throw ContractViolation("punctured image outside [N]");
    }
    sigma1_gate_ = sigma1_->forward_function();
    sigma2_gate_ = sigma2_->forward_function();
    sigma1_inv_star_ = starred_inverse(*sigma1_);
    sigma2_inv_star_ = starred_inverse(*sigma2_);

    uint64_t n = domain_size();
    std::vector<uint64_t> fwd(n);
    for (uint64_t w = 0; w < n; w++) {
        fwd[w] = (*sigma1_)(base.forward_value((*sigma2_)(w)));
    }
    std::vector<uint64_t> inv(2 * n);
    for (uint64_t wb = 0; wb < 2 * n; wb++) {
        inv[wb] = sigma2_inv_star_(base.inverse_value(sigma1_inv_star_(wb)));
    }
    forward_ = ClassicalFunctionTable(n_bits(), n_bits(), std::move(fwd));
    inverse_ = ClassicalFunctionTable(n_bits() + 1, n_bits() + 1, std::move(inv));
}

void ConjugatedOracle::on_query(Direction direction, uint64_t calls) {
    base_->charge_relayed(direction, 2 * calls);
}

uint64_t ConjugatedOracle::forward_label(uint64_t index, const Register &w, const Register &z, int free_offset) const {
    if (mode_ == OracleMode::functional) {
        return OracleHandle::forward_label(index, w, z, free_offset);
    }
    int n = n_bits();
    check_aux_room(free_offset, 2 * n);
    Register aux1{"aux1", free_offset, n};
    Register aux2{"aux2", free_offset + n, n};
    int next = free_offset + 2 * n;
    uint64_t i = xor_oracle_label(index, sigma2_gate_, w, aux2);
    i = base_->forward_label(i, aux2, aux1, next);
    i = xor_oracle_label(i, sigma1_gate_, aux1, z);
    i = base_->forward_label(i, aux2, aux1, next);
    i = xor_oracle_label(i, sigma2_gate_, w, aux2);
    check_clean(i, free_offset);
    return i;
}

uint64_t ConjugatedOracle::inverse_label(
    uint64_t index, const Register &wb, const Register &zb, int free_offset) const {
    if (mode_ == OracleMode::functional) {
        return OracleHandle::inverse_label(index, wb, zb, free_offset);
    }
    int n = n_bits() + 1;
    check_aux_room(free_offset, 2 * n);
    Register aux1{"aux1", free_offset, n};
    Register aux2{"aux2", free_offset + n, n};
    int next = free_offset + 2 * n;
    uint64_t i = xor_oracle_label(index, sigma1_inv_star_, wb, aux2);
    i = base_->inverse_label(i, aux2, aux1, next);
    i = xor_oracle_label(i, sigma2_inv_star_, aux1, zb);
    i = base_->inverse_label(i, aux2, aux1, next);
    i = xor_oracle_label(i, sigma1_inv_star_, wb, aux2);
    check_clean(i, free_offset);
    return i;
}

ConjugatedOracle compose_conjugated(
    std::shared_ptr<const Permutation> sigma1,
    std::shared_ptr<const Permutation> sigma2,
    OracleHandle &base,
    uint64_t y,
    OracleMode mode) {
    return ConjugatedOracle(std::move(sigma1), std::move(sigma2), base, y, mode);
}

// ---- SwapConjugatedOracle ----------------------------------------------------

SwapConjugatedOracle::SwapConjugatedOracle(OracleHandle &base, int position)
    : OracleHandle(base.n_bits()), base_(&base), position_(position) {
    if (position < 0 || position >= base.n_bits()) {
        throw ContractViolation("swap position " + std::to_string(position) + " out of range");
    }
}

void SwapConjugatedOracle::on_query(Direction direction, uint64_t calls) {
    base_->charge_relayed(direction, calls);
}

uint64_t SwapConjugatedOracle::swap_value(uint64_t v) const {
    return swap_positions(v, n_bits(), position_);
}

uint64_t SwapConjugatedOracle::forward_value(uint64_t w) const {
    return base_->forward_value(swap_value(w));
}

uint64_t SwapConjugatedOracle::inverse_value(uint64_t wb) const {
    uint64_t r = base_->inverse_value(wb);
    return inverse_encoding(swap_value(r >> 1), r & 1);
}

uint64_t SwapConjugatedOracle::forward_label(
    uint64_t index, const Register &w, const Register &z, int free_offset) const {
    uint64_t i = w.deposit(index, swap_value(w.extract(index)));
    i = base_->forward_label(i, w, z, free_offset);
    return w.deposit(i, swap_value(w.extract(i)));
}

uint64_t SwapConjugatedOracle::inverse_label(
    uint64_t index, const Register &wb, const Register &zb, int free_offset) const {
    Register value{zb.name, zb.offset + 1, zb.width - 1};
    uint64_t i = value.deposit(index, swap_value(value.extract(index)));
    i = base_->inverse_label(i, wb, zb, free_offset);
    return value.deposit(i, swap_value(value.extract(i)));
}

// ---- UniqueSearchOracle ------------------------------------------------------

uint64_t UniqueSearchEmbedding::h(const ClassicalFunctionTable &f, uint64_t x) const {
    int n = n_bits();
    int j_bits = n - suffix_bits - 1;
    uint64_t i = x >> (n - 1);
    uint64_t j = (x >> suffix_bits) & ((1ULL << j_bits) - 1);
    uint64_t u = x & ((1ULL << suffix_bits) - 1);
    if (i == (1 - case_bit) && u == suffix && f(j) == 1) {
        return target;
    }
    return (*perm)(x);
}

UniqueSearchOracle::UniqueSearchOracle(UniqueSearchEmbedding emb, FunctionOracle &f, OracleMode mode)
    : OracleHandle(emb.perm->n_bits()), emb_(std::move(emb)), f_(&f), mode_(mode) {
    int n = emb_.n_bits();
    int m = emb_.suffix_bits;
    if (m < 0 || m >= n) {
        throw ContractViolation("adaptive suffix must be shorter than the input");
    }
    if (f.table.domain_bits() != n - m - 1 || f.table.codomain_bits() != 1) {
        throw ContractViolation("UNIQUESEARCH function has the wrong shape");
    }
    int marked = 0;
    for (uint64_t v : f.table.table()) {
        marked += v == 1;
    }
    if (marked > 1) {
        throw ContractViolation("UNIQUESEARCH function marks more than one element");
    }
    if (emb_.target >= emb_.perm->size() || emb_.suffix >= (1ULL << m) || emb_.case_bit > 1) {
        throw ContractViolation("embedding parameters out of range");
    }
    uint64_t pre = emb_.perm->inverse(emb_.target);
    if ((pre & ((1ULL << m) - 1)) != emb_.suffix || (pre >> (n - 1)) != emb_.case_bit) {
        throw ContractViolation("target preimage disagrees with suffix or case bit");
    }
    perm_gate_ = emb_.perm->forward_function();
}

void UniqueSearchOracle::on_query(Direction direction, uint64_t calls) {
    if (direction == Direction::forward) {
        f_->calls += 2 * calls;
    }
}

uint64_t UniqueSearchOracle::forward_label(
    uint64_t index, const Register &w, const Register &z, int free_offset) const {
    if (mode_ == OracleMode::functional) {
        return OracleHandle::forward_label(index, w, z, free_offset);
    }
    int n = n_bits();
    int m = emb_.suffix_bits;
    check_aux_room(free_offset, 1);
    Register u{"u", w.offset, m};
    Register j{"j", w.offset + m, n - m - 1};
    Register top{"i", w.offset + n - 1, 1};
    Register fbit{"fbit", free_offset, 1};

    uint64_t i = xor_oracle_label(index, f_->table, j, fbit);
    bool hit = fbit.extract(i) == 1 && top.extract(i) == 1 - emb_.case_bit && u.extract(i) == emb_.suffix;
    if (hit) {
        i = xor_constant_label(i, z, emb_.target);
    } else {
        i = xor_oracle_label(i, perm_gate_, w, z);
    }
    i = xor_oracle_label(i, f_->table, j, fbit);
    check_clean(i, free_offset);
    return i;
}

UniqueSearchOracle build_unique_search_oracles(const UniqueSearchEmbedding &emb, FunctionOracle &f, OracleMode mode) {
    return UniqueSearchOracle(emb, f, mode);
}

// ---- QracDecodeHandle --------------------------------------------------------

QracDecodeHandle::QracDecodeHandle(QracDecodeOracle d, OracleMode mode)
    : OracleHandle(d.n_bits), d_(std::move(d)), mode_(mode) {
    uint64_t n = domain_size();
    if (d_.known_part.size() != n || d_.good_set.size() != n || d_.target_image >= n) {
        throw ContractViolation("decode oracle tables have the wrong size");
    }
    known_inverse_.assign(n, QracDecodeOracle::kUnknown);
    std::vector<uint64_t> good(n), known_gate(n);
    for (uint64_t w = 0; w < n; w++) {
        uint64_t v = d_.known_part[w];
        if (d_.good_set[w] != (v == QracDecodeOracle::kUnknown)) {
            throw ContractViolation("known part must be undefined exactly on the good set");
        }
        good[w] = d_.good_set[w];
        if (d_.good_set[w]) {
            continue;
        }
        if (v >= n || known_inverse_[v] != QracDecodeOracle::kUnknown) {
            throw ContractViolation("known part is not injective");
        }
        known_inverse_[v] = w;
        known_gate[w] = v;
    }
    std::vector<uint64_t> punctured(2 * n), known_inv_gate(2 * n);
    for (uint64_t wb = 0; wb < 2 * n; wb++) {
        uint64_t back = known_inverse_[wb >> 1];
        bool reject = (wb & 1) != 0 || back == QracDecodeOracle::kUnknown;
        punctured[wb] = reject;
        known_inv_gate[wb] = reject ? 0 : inverse_encoding(back, 0);
    }
    in_good_ = ClassicalFunctionTable(n_bits(), 1, std::move(good));
    known_gate_ = ClassicalFunctionTable(n_bits(), n_bits(), std::move(known_gate));
    punctured_ = ClassicalFunctionTable(n_bits() + 1, 1, std::move(punctured));
    known_inv_gate_ = ClassicalFunctionTable(n_bits() + 1, n_bits() + 1, std::move(known_inv_gate));
}

uint64_t QracDecodeHandle::forward_value(uint64_t w) const {
    return d_.good_set[w] ? d_.target_image : d_.known_part[w];
}

uint64_t QracDecodeHandle::inverse_value(uint64_t wb) const {
    uint64_t back = known_inverse_[wb >> 1];
    if ((wb & 1) != 0 || back == QracDecodeOracle::kUnknown) {
        return reject_element(n_bits());
    }
    return inverse_encoding(back, 0);
}

uint64_t QracDecodeHandle::forward_label(uint64_t index, const Register &w, const Register &z, int free_offset) const {
    if (mode_ == OracleMode::functional) {
        return OracleHandle::forward_label(index, w, z, free_offset);
    }
    check_aux_room(free_offset, 1);
    Register ind{"ind", free_offset, 1};
    uint64_t i = xor_oracle_label(index, in_good_, w, ind);
    if (ind.extract(i)) {
        i = xor_constant_label(i, z, d_.target_image);
    } else {
        i = xor_oracle_label(i, known_gate_, w, z);
    }
    i = xor_oracle_label(i, in_good_, w, ind);
    check_clean(i, free_offset);
    return i;
}

uint64_t QracDecodeHandle::inverse_label(
    uint64_t index, const Register &wb, const Register &zb, int free_offset) const {
    if (mode_ == OracleMode::functional) {
        return OracleHandle::inverse_label(index, wb, zb, free_offset);
    }
    check_aux_room(free_offset, 1);
    Register ind{"ind", free_offset, 1};
    uint64_t i = xor_oracle_label(index, punctured_, wb, ind);
    if (ind.extract(i)) {
        i = xor_constant_label(i, zb, reject_element(n_bits()));
    } else {
        i = xor_oracle_label(i, known_inv_gate_, wb, zb);
    }
    i = xor_oracle_label(i, punctured_, wb, ind);
    check_clean(i, free_offset);
    return i;
}

QracDecodeHandle build_qrac_decode_oracle(const QracDecodeOracle &d, OracleMode mode) {
    return QracDecodeHandle(d, mode);
}

}  // namespace perminv
