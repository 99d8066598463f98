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

#include "perminv/amplify.h"

#include <cmath>

#include "perminv/errors.h"

namespace perminv {

namespace {

/// ceil(x) that does not round a value like 8.000000000000002 up to 9.
uint64_t safe_ceil(double x) {
    return static_cast<uint64_t>(std::ceil(x * (1 - 1e-12)));
}

void check_base(const InverterSpec &base, InverterKind kind, int ell) {
    base.validate();
    if (base.kind != kind) {
        throw ContractViolation("amplification applied to the wrong inverter kind");
    }
    if (base.adaptive_bits != 0) {
        throw ContractViolation("amplification needs a non-adaptive base inverter");
    }
    if (ell < 1) {
        throw ContractViolation("repetition count must be at least 1");
    }
}

Permutation msb_flip(int n_bits, uint64_t flip) {
    std::vector<uint64_t> t(1ULL << n_bits);
    for (uint64_t x = 0; x < t.size(); x++) {
        t[x] = x ^ ((flip & 1) << (n_bits - 1));
    }
    return Permutation(n_bits, std::move(t));
}

PrepareFn repeated_prepare(const InverterSpec &base, int ell) {
    return [base, ell](const Permutation &perm, const Coins &r) {
        auto plan = make_repetition_plan(base.n_bits, ell, r, base.kind);
        Preparation prep;
        for (int i = 0; i < ell; i++) {
            const auto &cj = plan.conjugators[i];
            Permutation conjugated = cj.sigma1->after(perm.after(*cj.sigma2));
            prep.advice.parts.push_back(base.prepare(conjugated, plan.per_iteration_seeds[ell + i]).advice);
        }
        return prep;
    };
}

void check_parts(const Advice &advice, int ell) {
    if (advice.parts.size() != static_cast<size_t>(ell)) {
        throw ContractViolation("amplified advice has the wrong number of parts");
    }
}

}  // namespace

RepetitionPlan make_repetition_plan(int n_bits, int ell, const Coins &r, InverterKind kind) {
    RepetitionPlan plan;
    plan.ell = ell;
    for (int i = 0; i < 2 * ell; i++) {
        plan.per_iteration_seeds.push_back(r.sub(i));
    }
    for (int i = 0; i < ell; i++) {
        const Coins &ri = plan.per_iteration_seeds[i];
        Conjugators cj;
        cj.sigma1 = std::make_shared<const Permutation>(Permutation::random(n_bits, ri.sub(0).seed));
        if (kind == InverterKind::search) {
            cj.sigma2 = std::make_shared<const Permutation>(Permutation::random(n_bits, ri.sub(1).seed));
        } else {
            cj.flip = ri.sub(1).rng().coin() ? 1 : 0;
            cj.sigma2 = std::make_shared<const Permutation>(msb_flip(n_bits, cj.flip));
        }
        plan.conjugators.push_back(std::move(cj));
    }
    return plan;
}

InverterSpec amplify_search(const InverterSpec &base, int ell, OracleMode mode) {
    check_base(base, InverterKind::search, ell);
    InverterSpec spec;
    spec.name = base.name + "_x" + std::to_string(ell);
    spec.kind = InverterKind::search;
    spec.n_bits = base.n_bits;
    spec.advice_qubits = static_cast<uint64_t>(ell) * base.advice_qubits;
    spec.query_budget = static_cast<uint64_t>(ell) * (base.query_budget + 1);
    spec.prepare = repeated_prepare(base, ell);
    spec.invert = [base, ell, mode](OracleHandle &oracle, const Advice &advice, uint64_t, uint64_t y, const Coins &r) {
        check_parts(advice, ell);
        int n = base.n_bits;
        auto plan = make_repetition_plan(n, ell, r, InverterKind::search);
        RegisterLayout layout({{"w", n}, {"z", n}});
        const Register &w = layout.at("w");
        const Register &z = layout.at("z");
        double all_fail = 1;
        uint64_t found = 0;
        for (int i = 0; i < ell; i++) {
            const auto &cj = plan.conjugators[i];
            ConjugatedOracle conj(cj.sigma1, cj.sigma2, oracle, y, mode);
            conj.set_budget(base.query_budget);
            auto out = base.invert(conj, advice.parts[i], 0, (*cj.sigma1)(y), plan.per_iteration_seeds[ell + i]);

            // Verification: one forward query on sum_x sqrt(p_x) |sigma2(x)>|0>.
            std::vector<Amplitude> amps(1ULL << (2 * n));
            double total = 0;
            for (uint64_t x = 0; x < out.distribution.size(); x++) {
                total += out.distribution[x];
            }
            for (uint64_t x = 0; x < out.distribution.size(); x++) {
                amps[(*cj.sigma2)(x)] = std::sqrt(out.distribution[x] / total);
            }
            auto s = StateVector::from_amplitudes(std::move(amps));
            oracle.forward_query(s, layout, "w", "z");
            double verified = 0;
            for (uint64_t idx = 0; idx < s.size(); idx++) {
                double p = std::norm(s[idx]);
                if (p > 0 && z.extract(idx) == y) {
                    verified += p;
                    found = w.extract(idx);
                }
            }
            all_fail *= 1 - std::min(verified, 1.0);
        }
        InversionOutcome result;
        result.distribution.assign(1ULL << n, 0.0);
        result.distribution[found] += 1 - all_fail;
        result.distribution[0] += all_fail;
        result.verified_probability = 1 - all_fail;
        return result;
    };
    return spec;
}

int restricted_ell(double epsilon) {
    if (!(epsilon > 0 && epsilon <= 1)) {
        throw ContractViolation("epsilon must lie in (0, 1]");
    }
    return static_cast<int>(safe_ceil(std::log(10.0) / epsilon));
}

RestrictedAmplification amplify_search_restricted(const InverterSpec &base, double epsilon, OracleMode mode) {
    RestrictedAmplification out;
    out.ell = restricted_ell(epsilon);
    out.inverter = amplify_search(base, out.ell, mode);
    out.queries_protocol = static_cast<uint64_t>(out.ell) * (base.query_budget + 1);
    out.queries_alternative = static_cast<uint64_t>(out.ell + 1) * base.query_budget;
    return out;
}

double majority_one_probability(const std::vector<double> &q) {
    std::vector<double> count(q.size() + 1, 0.0);
    count[0] = 1;
    for (size_t i = 0; i < q.size(); i++) {
        for (size_t k = i + 1; k > 0; k--) {
            count[k] = count[k] * (1 - q[i]) + count[k - 1] * q[i];
        }
        count[0] *= 1 - q[i];
    }
    double p = 0;
    for (size_t k = 0; k < count.size(); k++) {
        if (2 * k > q.size()) {
            p += count[k];
        }
    }
    return std::min(p, 1.0);
}

InverterSpec amplify_decision(const InverterSpec &base, int ell, OracleMode mode) {
    check_base(base, InverterKind::decision, ell);
    InverterSpec spec;
    spec.name = base.name + "_maj" + std::to_string(ell);
    spec.kind = InverterKind::decision;
    spec.n_bits = base.n_bits;
    spec.advice_qubits = static_cast<uint64_t>(ell) * base.advice_qubits;
    spec.query_budget = static_cast<uint64_t>(ell) * base.query_budget;
    spec.prepare = repeated_prepare(base, ell);
    spec.invert = [base, ell, mode](OracleHandle &oracle, const Advice &advice, uint64_t, uint64_t y, const Coins &r) {
        check_parts(advice, ell);
        auto plan = make_repetition_plan(base.n_bits, ell, r, InverterKind::decision);
        std::vector<double> q(ell);
        for (int i = 0; i < ell; i++) {
            const auto &cj = plan.conjugators[i];
            ConjugatedOracle conj(cj.sigma1, cj.sigma2, oracle, y, mode);
            conj.set_budget(base.query_budget);
            auto out = base.invert(conj, advice.parts[i], 0, (*cj.sigma1)(y), plan.per_iteration_seeds[ell + i]);
            // b* = b xor r*: Pr[b* = 1] = Pr[b = 1 xor r*].
            q[i] = out.distribution[1 ^ cj.flip];
        }
        double one = majority_one_probability(q);
        InversionOutcome result;
        result.distribution = {1 - one, one};
        return result;
    };
    return spec;
}

uint64_t required_ell_decision(double delta, double target_failure) {
    if (!(delta > 0 && delta <= 0.5) || !(target_failure > 0 && target_failure < 1)) {
        throw ContractViolation("required_ell_decision needs 0 < delta <= 1/2 and 0 < target < 1");
    }
    return std::max<uint64_t>(1, safe_ceil((1 + 2 * delta) * std::log(1 / target_failure) / (delta * delta)));
}

}  // namespace perminv
