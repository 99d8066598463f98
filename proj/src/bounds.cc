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

#include "perminv/bounds.h"

#include <algorithm>
#include <cmath>

#include "perminv/errors.h"

namespace perminv {

namespace {

TailBound make(TailKind kind, std::vector<double> params, double raw) {
    TailBound t;
    t.kind = kind;
    t.parameters = std::move(params);
    t.raw_value = raw;
    t.bound_value = std::clamp(raw, 0.0, 1.0);
    return t;
}

}  // namespace

TailBound chernoff_lower_tail(uint64_t n, double p, double delta) {
    if (!(p > 0 && p < 1) || !(delta > 0 && delta < 1)) {
        throw ContractViolation("chernoff_lower_tail needs 0 < p < 1 and 0 < delta < 1");
    }
    double mu = static_cast<double>(n) * p;
    return make(TailKind::chernoff, {static_cast<double>(n), p, delta}, 2 * std::exp(-delta * delta * mu / 2));
}

TailBound chernoff_majority_tail(uint64_t n, double p) {
    if (!(p > 0 && p < 1)) {
        throw ContractViolation("chernoff_majority_tail needs 0 < p < 1");
    }
    double d = p - 0.5;
    return make(TailKind::chernoff_majority, {static_cast<double>(n), p}, std::exp(-static_cast<double>(n) * d * d / (2 * p)));
}

TailBound reverse_markov(double expectation, double theta) {
    if (!(expectation >= 0 && expectation <= 1) || !(theta > 0 && theta < 1)) {
        throw ContractViolation("reverse_markov needs 0 <= E <= 1 and 0 < theta < 1");
    }
    double raw = (expectation - theta) / (1 - theta);
    return make(TailKind::reverse_markov, {expectation, theta}, std::max(0.0, raw));
}

std::vector<uint64_t> averaging_subset(const std::vector<double> &table, double epsilon, double theta) {
    if (table.empty() || !(theta > 0 && theta < 1) || !(epsilon > 0 && epsilon <= 1)) {
        throw ContractViolation("averaging_subset needs a non-empty table, 0 < epsilon <= 1, 0 < theta < 1");
    }
    double mean = 0;
    for (double p : table) {
        if (!(p >= 0 && p <= 1)) {
            throw ContractViolation("averaging_subset entries must be probabilities");
        }
        mean += p;
    }
    mean /= static_cast<double>(table.size());
    if (mean < epsilon * (1 - 1e-12)) {
        throw ContractViolation("averaging_subset: table mean is below epsilon");
    }
    std::vector<uint64_t> out;
    for (uint64_t x = 0; x < table.size(); x++) {
        if (table[x] >= theta * epsilon) {
            out.push_back(x);
        }
    }
    if (static_cast<double>(out.size()) < (1 - theta) * epsilon * static_cast<double>(table.size()) * (1 - 1e-12)) {
        throw std::logic_error("averaging_subset produced a set below its guaranteed size");
    }
    return out;
}

RegisterLayout QueryCircuit::layout() const {
    return RegisterLayout({{"w", n_bits}, {"z", n_bits}, {"work", work_qubits}});
}

uint64_t QueryCircuit::query_count() const {
    uint64_t q = 0;
    for (const auto &s : steps) {
        q += s.op == Op::query;
    }
    return q;
}

StateVector QueryCircuit::run(OracleHandle &oracle) const {
    auto l = layout();
    StateVector s(l.num_qubits());
    for (const auto &step : steps) {
        switch (step.op) {
            case Op::query:
                oracle.forward_query(s, l, "w", "z");
                break;
            case Op::hadamard:
                apply_hadamard(s, step.a);
                break;
            case Op::ry:
                apply_ry(s, step.a, step.angle);
                break;
            case Op::swap:
                apply_swap_bits(s, l, "w", step.a, step.b);
                break;
            case Op::xor_constant:
                apply_xor_constant(s, l, "w", step.value);
                break;
        }
    }
    return s;
}

QueryCircuit random_query_circuit(int n_bits, int queries, uint64_t seed) {
    Rng rng(seed);
    QueryCircuit c;
    c.n_bits = n_bits;
    c.work_qubits = 1;
    int total = 2 * n_bits + 1;
    for (int q = 0; q <= queries; q++) {
        int gates = 1 + static_cast<int>(rng.uniform_below(4));
        for (int g = 0; g < gates; g++) {
            QueryCircuit::Step s;
            switch (rng.uniform_below(4)) {
                case 0:
                    s.op = QueryCircuit::Op::hadamard;
                    s.a = static_cast<int>(rng.uniform_below(total));
                    break;
                case 1:
                    s.op = QueryCircuit::Op::ry;
                    s.a = static_cast<int>(rng.uniform_below(total));
                    s.angle = 2 * M_PI * rng.uniform01();
                    break;
                case 2:
                    s.op = QueryCircuit::Op::swap;
                    s.a = static_cast<int>(rng.uniform_below(n_bits));
                    s.b = static_cast<int>(rng.uniform_below(n_bits));
                    break;
                default:
                    s.op = QueryCircuit::Op::xor_constant;
                    s.value = rng.uniform_below(1ULL << n_bits);
                    break;
            }
            c.steps.push_back(s);
        }
        if (q < queries) {
            c.steps.push_back(QueryCircuit::Step{});
        }
    }
    return c;
}

SwappingReport swapping_check(
    const QueryCircuit &algorithm, const ClassicalFunctionTable &f, const ClassicalFunctionTable &g, uint64_t T) {
    if (f.domain_bits() != algorithm.n_bits || g.domain_bits() != algorithm.n_bits ||
        f.codomain_bits() != algorithm.n_bits || g.codomain_bits() != algorithm.n_bits) {
        throw ContractViolation("swapping_check functions must map n bits to n bits");
    }
    std::vector<bool> differ(1ULL << algorithm.n_bits);
    for (uint64_t x = 0; x < differ.size(); x++) {
        differ[x] = f(x) != g(x);
    }
    TableOracle of(f), og(g);
    of.set_budget(T);
    og.set_budget(T);
    size_t probe = of.add_probe(Direction::forward, differ);
    StateVector psi_f = algorithm.run(of);
    StateVector psi_g = algorithm.run(og);

    SwappingReport r;
    r.distance = euclidean_distance(psi_f, psi_g);
    r.magnitude = total_query_magnitude(of, probe);
    r.bound = std::sqrt(static_cast<double>(T) * r.magnitude);
    r.holds = r.distance <= r.bound + 1e-12;
    r.hybrid_bound = 2 * r.bound;
    r.holds_hybrid = r.distance <= r.hybrid_bound + 1e-12;
    r.tightness = r.bound > 0 ? r.distance / r.bound : 0.0;
    return r;
}

}  // namespace perminv
