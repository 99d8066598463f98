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

#include "perminv/reduce.h"

#include <cmath>

#include "perminv/errors.h"
#include "perminv/parallel.h"

namespace perminv {

Permutation swap_permutation(int n_bits, int position) {
    std::vector<uint64_t> t(1ULL << n_bits);
    for (uint64_t x = 0; x < t.size(); x++) {
        t[x] = swap_positions(x, n_bits, position);
    }
    return Permutation(n_bits, std::move(t));
}

InverterSpec search_from_decision(const InverterSpec &dpi, int ell, OracleMode mode) {
    InverterSpec amp = amplify_decision(dpi, ell, mode);
    int n = dpi.n_bits;
    InverterSpec spec;
    spec.name = "search_from_" + dpi.name;
    spec.kind = InverterKind::search;
    spec.n_bits = n;
    spec.advice_qubits = static_cast<uint64_t>(n) * amp.advice_qubits;
    spec.query_budget = static_cast<uint64_t>(n) * amp.query_budget;
    spec.prepare = [amp, n](const Permutation &perm, const Coins &r) {
        Preparation prep;
        for (int j = 0; j < n; j++) {
            Permutation swapped = perm.after(swap_permutation(n, j));
            prep.advice.parts.push_back(amp.prepare(swapped, r.sub(j)).advice);
        }
        return prep;
    };
    spec.invert = [amp, n](OracleHandle &oracle, const Advice &advice, uint64_t, uint64_t y, const Coins &r) {
        if (advice.parts.size() != static_cast<size_t>(n)) {
            throw ContractViolation("search-from-decision advice has the wrong number of parts");
        }
        std::vector<double> one(n);
        for (int j = 0; j < n; j++) {
            SwapConjugatedOracle swapped(oracle, j);
            swapped.set_budget(amp.query_budget);
            one[j] = amp.invert(swapped, advice.parts[j], 0, y, r.sub(j)).distribution[1];
        }
        InversionOutcome out;
        out.distribution.assign(1ULL << n, 1.0);
        for (uint64_t x = 0; x < out.distribution.size(); x++) {
            for (int j = 0; j < n; j++) {
                bool bit = ((x >> (n - 1 - j)) & 1) != 0;
                out.distribution[x] *= bit ? one[j] : 1 - one[j];
            }
        }
        return out;
    };
    return spec;
}

FunctionOracle UniqueSearchInstance::oracle() const {
    if (domain_bits < 0 || domain_bits > 20) {
        throw ContractViolation("UNIQUESEARCH domain out of range");
    }
    std::vector<uint64_t> t(1ULL << domain_bits, 0);
    if (marked) {
        if (*marked >= t.size()) {
            throw ContractViolation("marked element outside the domain");
        }
        t[*marked] = 1;
    }
    return FunctionOracle{ClassicalFunctionTable(domain_bits, 1, std::move(t)), 0};
}

UniqueSearchRun unique_search_from_adpi(
    const InverterSpec &adpi, const UniqueSearchInstance &instance, uint64_t seed, OracleMode mode) {
    adpi.validate();
    if (adpi.kind != InverterKind::decision) {
        throw ContractViolation("unique-search reduction needs a decision inverter");
    }
    int n = adpi.n_bits;
    int m = adpi.adaptive_bits;
    if (instance.domain_bits != n - m - 1) {
        throw ContractViolation("instance domain must have n - m - 1 bits");
    }
    Coins root{seed};
    Coins r = root.sub(0);
    auto perm = std::make_shared<const Permutation>(Permutation::random(n, root.sub(1).seed));
    Preparation prep = adpi.prepare(*perm, r);
    if (prep.advice.total_qubits() > adpi.advice_qubits) {
        throw ResourceViolation("adaptive inverter exceeded its advice size");
    }
    if (prep.mu >= (1ULL << m)) {
        throw ContractViolation("adaptive suffix out of range");
    }
    uint64_t s = root.sub(2).rng().uniform_below(1ULL << (n - m));
    UniqueSearchEmbedding emb;
    emb.perm = perm;
    emb.target = (*perm)((s << m) | prep.mu);
    emb.suffix = prep.mu;
    emb.suffix_bits = m;
    emb.case_bit = s >> (n - m - 1);

    FunctionOracle f = instance.oracle();
    UniqueSearchOracle h(emb, f, mode);
    h.set_budget(adpi.query_budget);
    auto out = adpi.invert(h, prep.advice, prep.mu, emb.target, r);
    Rng measure = root.sub(3).rng();
    uint64_t b = sample_index(out.distribution, measure);

    UniqueSearchRun run;
    run.yes = (emb.case_bit == 0 ? b : 1 - b) == 1;
    run.f_queries = f.calls;
    run.h_queries = h.query_count();
    run.query_budget = adpi.query_budget;
    run.case_bit = emb.case_bit;
    run.suffix = emb.suffix;
    return run;
}

DistributionalError measure_distributional_error(
    const UniqueSearchAlgorithm &algorithm,
    const std::vector<UniqueSearchInstance> &yes_instances,
    const std::vector<UniqueSearchInstance> &no_instances,
    uint64_t trials,
    uint64_t seed,
    int threads) {
    if (trials < 1 || yes_instances.empty() || no_instances.empty()) {
        throw ContractViolation("distributional error needs trials and instances of both kinds");
    }
    std::vector<uint8_t> no_wrong(trials), yes_wrong(trials);
    parallel_for(2 * trials, threads, [&](uint64_t k) {
        uint64_t t = k / 2;
        if (k % 2 == 0) {
            no_wrong[t] = algorithm(no_instances[t % no_instances.size()], derive_seed(seed, k)) ? 1 : 0;
        } else {
            yes_wrong[t] = algorithm(yes_instances[t % yes_instances.size()], derive_seed(seed, k)) ? 0 : 1;
        }
    });
    DistributionalError e;
    e.trials = trials;
    for (uint64_t t = 0; t < trials; t++) {
        e.p0 += no_wrong[t];
        e.p1 += yes_wrong[t];
    }
    double n = static_cast<double>(trials);
    e.p0 /= n;
    e.p1 /= n;
    e.se0 = std::sqrt(e.p0 * (1 - e.p0) / n);
    e.se1 = std::sqrt(e.p1 * (1 - e.p1) / n);
    return e;
}

}  // namespace perminv
