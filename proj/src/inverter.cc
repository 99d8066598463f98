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

#include "perminv/inverter.h"

#include <cmath>
#include <memory>
#include <numeric>

#include "perminv/errors.h"
#include "perminv/parallel.h"

namespace perminv {

namespace {

void push_value(std::vector<bool> &bits, uint64_t value, int width) {
    for (int b = width - 1; b >= 0; b--) {
        bits.push_back(((value >> b) & 1) != 0);
    }
}

uint64_t read_value(const std::vector<bool> &bits, uint64_t offset, int width) {
    if (offset + width > bits.size()) {
        throw ContractViolation("advice is shorter than its declared layout");
    }
    uint64_t v = 0;
    for (int b = 0; b < width; b++) {
        v = (v << 1) | (bits[offset + b] ? 1 : 0);
    }
    return v;
}

InversionOutcome point_mass(int bits, uint64_t value) {
    InversionOutcome out;
    out.distribution.assign(1ULL << bits, 0.0);
    out.distribution[value] = 1.0;
    return out;
}

void check_n(int n_bits) {
    if (n_bits < 1 || n_bits > 10) {
        throw ContractViolation("inverter n_bits must lie in [1, 10]");
    }
}

/// Spends `count` forward queries on |0>|0>.
void dummy_queries(OracleHandle &oracle, uint64_t count) {
    if (count == 0) {
        return;
    }
    int n = oracle.n_bits();
    RegisterLayout layout({{"w", n}, {"z", n}});
    StateVector s(2 * n);
    for (uint64_t q = 0; q < count; q++) {
        oracle.forward_query(s, layout, "w", "z");
    }
}

Advice inverse_table_advice(const Permutation &perm) {
    Advice a;
    int n = perm.n_bits();
    a.qubits = static_cast<int>(perm.size()) * n;
    for (uint64_t y = 0; y < perm.size(); y++) {
        push_value(a.bits, perm.inverse(y), n);
    }
    return a;
}

Advice msb_table_advice(const Permutation &perm) {
    Advice a;
    int n = perm.n_bits();
    a.qubits = static_cast<int>(perm.size());
    for (uint64_t y = 0; y < perm.size(); y++) {
        a.bits.push_back(((perm.inverse(y) >> (n - 1)) & 1) != 0);
    }
    return a;
}

}  // namespace

uint64_t Advice::total_qubits() const {
    uint64_t total = static_cast<uint64_t>(qubits);
    for (const auto &p : parts) {
        total += p.total_qubits();
    }
    return total;
}

bool Advice::is_classical() const {
    if (!classical) {
        return false;
    }
    for (const auto &p : parts) {
        if (!p.is_classical()) {
            return false;
        }
    }
    return true;
}

void InverterSpec::validate() const {
    check_n(n_bits);
    if (adaptive_bits < 0 || adaptive_bits >= n_bits) {
        throw ContractViolation("adaptive bits m must satisfy 0 <= m < n");
    }
    if (!prepare || !invert) {
        throw ContractViolation("inverter '" + name + "' is missing a phase");
    }
}

uint64_t sample_index(const std::vector<double> &distribution, Rng &rng) {
    double u = rng.uniform01();
    double acc = 0;
    uint64_t last = 0;
    for (uint64_t i = 0; i < distribution.size(); i++) {
        if (distribution[i] <= 0) {
            continue;
        }
        last = i;
        acc += distribution[i];
        if (u < acc) {
            return i;
        }
    }
    return last;
}

// ---- baselines ---------------------------------------------------------------

InverterSpec grover_spi(int n_bits, int iterations) {
    check_n(n_bits);
    if (iterations < 0) {
        throw ContractViolation("Grover iteration count must be non-negative");
    }
    InverterSpec spec;
    spec.name = "grover";
    spec.kind = InverterKind::search;
    spec.n_bits = n_bits;
    spec.query_budget = 2 * static_cast<uint64_t>(iterations);
    spec.prepare = [](const Permutation &, const Coins &) {
        return Preparation{};
    };
    spec.invert = [n_bits, iterations](OracleHandle &oracle, const Advice &, uint64_t, uint64_t y, const Coins &) {
        RegisterLayout layout({{"w", n_bits}, {"z", n_bits}, {"anc", 1}});
        const Register &z = layout.at("z");
        const Register &anc = layout.at("anc");
        StateVector s(layout.num_qubits());
        apply_hadamard(s, layout, "w");
        apply_xor_constant(s, layout, "anc", 1);
        apply_hadamard(s, anc.offset);
        for (int k = 0; k < iterations; k++) {
            oracle.forward_query(s, layout, "w", "z");
            s.relabel([&](uint64_t i) {
                return z.extract(i) == y ? i ^ (1ULL << anc.offset) : i;
            });
            oracle.forward_query(s, layout, "w", "z");
            apply_diffusion(s, layout, "w");
        }
        InversionOutcome out;
        out.distribution = outcome_distribution(s, layout, "w");
        out.final_state = std::move(s);
        return out;
    };
    return spec;
}

InverterSpec lookup_spi(int n_bits, double known_fraction) {
    check_n(n_bits);
    if (!(known_fraction >= 0 && known_fraction <= 1)) {
        throw ContractViolation("known_fraction must lie in [0, 1]");
    }
    uint64_t size = 1ULL << n_bits;
    uint64_t covered = static_cast<uint64_t>(std::ceil(known_fraction * static_cast<double>(size) - 1e-9));
    covered = std::min(covered, size);
    InverterSpec spec;
    spec.name = "lookup";
    spec.kind = InverterKind::search;
    spec.n_bits = n_bits;
    spec.advice_qubits = covered * n_bits;
    auto chosen = [n_bits](const Coins &r) {
        return Permutation::random(n_bits, r.sub(0).seed);
    };
    spec.prepare = [=](const Permutation &perm, const Coins &r) {
        auto order = chosen(r);
        Preparation p;
        p.advice.qubits = static_cast<int>(covered) * n_bits;
        for (uint64_t i = 0; i < covered; i++) {
            push_value(p.advice.bits, perm.inverse(order(i)), n_bits);
        }
        return p;
    };
    spec.invert = [=](OracleHandle &, const Advice &advice, uint64_t, uint64_t y, const Coins &r) {
        auto order = chosen(r);
        for (uint64_t i = 0; i < covered; i++) {
            if (order(i) == y) {
                return point_mass(n_bits, read_value(advice.bits, i * n_bits, n_bits));
            }
        }
        return point_mass(n_bits, 0);
    };
    return spec;
}

InverterSpec full_table_spi(int n_bits) {
    check_n(n_bits);
    InverterSpec spec;
    spec.name = "full_table";
    spec.kind = InverterKind::search;
    spec.n_bits = n_bits;
    spec.advice_qubits = (1ULL << n_bits) * n_bits;
    spec.prepare = [](const Permutation &perm, const Coins &) {
        return Preparation{inverse_table_advice(perm), 0};
    };
    spec.invert = [n_bits](OracleHandle &, const Advice &advice, uint64_t, uint64_t y, const Coins &) {
        return point_mass(n_bits, read_value(advice.bits, y * n_bits, n_bits));
    };
    return spec;
}

InverterSpec constant_spi(int n_bits) {
    check_n(n_bits);
    InverterSpec spec;
    spec.name = "constant";
    spec.kind = InverterKind::search;
    spec.n_bits = n_bits;
    spec.prepare = [](const Permutation &, const Coins &) {
        return Preparation{};
    };
    spec.invert = [n_bits](OracleHandle &, const Advice &, uint64_t, uint64_t, const Coins &) {
        return point_mass(n_bits, 0);
    };
    return spec;
}

InverterSpec full_table_dpi(int n_bits) {
    check_n(n_bits);
    InverterSpec spec;
    spec.name = "full_table";
    spec.kind = InverterKind::decision;
    spec.n_bits = n_bits;
    spec.advice_qubits = 1ULL << n_bits;
    spec.prepare = [](const Permutation &perm, const Coins &) {
        return Preparation{msb_table_advice(perm), 0};
    };
    spec.invert = [](OracleHandle &, const Advice &advice, uint64_t, uint64_t y, const Coins &) {
        return point_mass(1, read_value(advice.bits, y, 1));
    };
    return spec;
}

InverterSpec constant_dpi(int n_bits, uint64_t bit) {
    check_n(n_bits);
    InverterSpec spec;
    spec.name = "constant";
    spec.kind = InverterKind::decision;
    spec.n_bits = n_bits;
    spec.prepare = [](const Permutation &, const Coins &) {
        return Preparation{};
    };
    spec.invert = [bit](OracleHandle &, const Advice &, uint64_t, uint64_t, const Coins &) {
        return point_mass(1, bit & 1);
    };
    return spec;
}

InverterSpec synthetic_spi(int n_bits, double epsilon, uint64_t dummy, BiasSource source) {
    check_n(n_bits);
    if (!(epsilon >= 0 && epsilon <= 1)) {
        throw ContractViolation("synthetic epsilon must lie in [0, 1]");
    }
    InverterSpec spec;
    spec.name = "synthetic";
    spec.kind = InverterKind::search;
    spec.n_bits = n_bits;
    spec.advice_qubits = (1ULL << n_bits) * n_bits;
    spec.query_budget = dummy;
    spec.prepare = [](const Permutation &perm, const Coins &) {
        return Preparation{inverse_table_advice(perm), 0};
    };
    spec.invert = [=](OracleHandle &oracle, const Advice &advice, uint64_t, uint64_t y, const Coins &r) {
        dummy_queries(oracle, dummy);
        uint64_t answer = read_value(advice.bits, y * n_bits, n_bits);
        uint64_t wrong = answer ^ 1;
        if (source == BiasSource::shared_randomness) {
            Rng rng = r.sub(0).rng();
            return point_mass(n_bits, rng.bernoulli(epsilon) ? answer : wrong);
        }
        InversionOutcome out;
        out.distribution.assign(1ULL << n_bits, 0.0);
        out.distribution[answer] = epsilon;
        out.distribution[wrong] = 1 - epsilon;
        return out;
    };
    return spec;
}

InverterSpec synthetic_dpi(int n_bits, double delta, uint64_t dummy, BiasSource source) {
    check_n(n_bits);
    if (!(delta >= 0 && delta <= 0.5)) {
        throw ContractViolation("synthetic delta must lie in [0, 1/2]");
    }
    InverterSpec spec;
    spec.name = "synthetic";
    spec.kind = InverterKind::decision;
    spec.n_bits = n_bits;
    spec.advice_qubits = 1ULL << n_bits;
    spec.query_budget = dummy;
    spec.prepare = [](const Permutation &perm, const Coins &) {
        return Preparation{msb_table_advice(perm), 0};
    };
    spec.invert = [=](OracleHandle &oracle, const Advice &advice, uint64_t, uint64_t y, const Coins &r) {
        dummy_queries(oracle, dummy);
        uint64_t answer = read_value(advice.bits, y, 1);
        double p = 0.5 + delta;
        if (source == BiasSource::shared_randomness) {
            Rng rng = r.sub(0).rng();
            return point_mass(1, rng.bernoulli(p) ? answer : answer ^ 1);
        }
        InversionOutcome out;
        out.distribution.assign(2, 0.0);
        out.distribution[answer] = p;
        out.distribution[answer ^ 1] = 1 - p;
        return out;
    };
    return spec;
}

InverterSpec exhaustive_adpi(int n_bits, int adaptive_bits) {
    check_n(n_bits);
    if (adaptive_bits < 0 || adaptive_bits >= n_bits) {
        throw ContractViolation("adaptive bits m must satisfy 0 <= m < n");
    }
    int m = adaptive_bits;
    InverterSpec spec;
    spec.name = "exhaustive";
    spec.kind = InverterKind::decision;
    spec.n_bits = n_bits;
    spec.adaptive_bits = m;
    spec.query_budget = 1ULL << (n_bits - m);
    spec.prepare = [m](const Permutation &, const Coins &r) {
        Preparation p;
        p.mu = m == 0 ? 0 : r.sub(0).rng().uniform_below(1ULL << m);
        return p;
    };
    spec.invert = [n_bits, m](OracleHandle &oracle, const Advice &, uint64_t mu, uint64_t y, const Coins &) {
        RegisterLayout layout({{"w", n_bits}, {"z", n_bits}});
        const Register &z = layout.at("z");
        for (uint64_t x = 0; x < (1ULL << (n_bits - m)); x++) {
            uint64_t w = (x << m) | mu;
            auto s = StateVector::basis(2 * n_bits, w);
            oracle.forward_query(s, layout, "w", "z");
            uint64_t hit = w;
            for (uint64_t i = 0; i < s.size(); i++) {
                if (s[i] != Amplitude(0)) {
                    hit = i;
                    break;
                }
            }
            if (z.extract(hit) == y) {
                return point_mass(1, w >> (n_bits - 1));
            }
        }
        return point_mass(1, 0);
    };
    return spec;
}

// ---- experiment runners --------------------------------------------------------

SingleRun run_single(
    const InverterSpec &inv, const Permutation &perm, const Coins &r, const Preparation &prep, uint64_t x) {
    int n = inv.n_bits;
    int m = inv.adaptive_bits;
    if (perm.n_bits() != n) {
        throw ContractViolation("permutation and inverter disagree on n_bits");
    }
    if (x >= (1ULL << (n - m)) || prep.mu >= (1ULL << m)) {
        throw ContractViolation("challenge preimage or adaptive suffix out of range");
    }
    SingleRun run;
    run.advice_qubits = prep.advice.total_qubits();
    if (run.advice_qubits > inv.advice_qubits) {
        throw ResourceViolation(
            "inverter '" + inv.name + "' produced " + std::to_string(run.advice_qubits) + " advice qubits, declared " +
            std::to_string(inv.advice_qubits));
    }
    run.preimage = (x << m) | prep.mu;
    uint64_t y = perm(run.preimage);
    auto oracle = make_two_sided(perm, y);
    oracle.set_budget(inv.query_budget);
    run.outcome = inv.invert(oracle, prep.advice, prep.mu, y, r);
    run.queries = oracle.query_count();
    run.oracle_calls = oracle.oracle_calls();

    const auto &dist = run.outcome.distribution;
    if (dist.size() != (1ULL << inv.output_bits())) {
        throw ContractViolation("inverter '" + inv.name + "' returned a distribution of the wrong size");
    }
    double total = std::accumulate(dist.begin(), dist.end(), 0.0);
    if (std::abs(total - 1) > kNormTolerance) {
        throw ContractViolation("inverter '" + inv.name + "' returned an unnormalized distribution");
    }
    run.answer = inv.kind == InverterKind::search ? x : run.preimage >> (n - 1);
    run.success = dist[run.answer];
    return run;
}

SingleRun run_single(const InverterSpec &inv, const Permutation &perm, const Coins &r, uint64_t x) {
    return run_single(inv, perm, r, inv.prepare(perm, r), x);
}

namespace {

struct TrialStats {
    double value = 0;
    double verified = 0;
    bool has_verified = false;
    uint64_t queries = 0;
    uint64_t calls = 0;
    uint64_t advice = 0;
};

void merge(const TrialStats &t, ExperimentResult &res, double &sum_sq, double &verified_sum, bool &any_verified) {
    res.success_probability += t.value;
    sum_sq += t.value * t.value;
    verified_sum += t.verified;
    any_verified = any_verified || t.has_verified;
    res.queries_used = std::max(res.queries_used, t.queries);
    res.oracle_calls = std::max(res.oracle_calls, t.calls);
    res.advice_qubits_used = std::max(res.advice_qubits_used, t.advice);
}

ExperimentResult run_experiment(const InverterSpec &inv, const EvalMode &mode, InverterKind kind) {
    inv.validate();
    if (inv.kind != kind) {
        throw ContractViolation("inverter '" + inv.name + "' has the wrong kind for this experiment");
    }
    int n = inv.n_bits;
    int m = inv.adaptive_bits;
    uint64_t xs = 1ULL << (n - m);
    Coins root{mode.seed};
    ExperimentResult res;
    res.mode = mode.kind;
    res.seed = mode.seed;
    std::vector<TrialStats> stats;

    if (mode.kind == EvalMode::Kind::exact) {
        std::vector<Permutation> perms;
        if (mode.enumerate_permutations) {
            perms = all_permutations(n);
        } else {
            for (uint64_t k = 0; k < mode.perm_samples; k++) {
                perms.push_back(Permutation::random(n, root.sub(0).sub(k).seed));
            }
        }
        uint64_t rs = std::max<uint64_t>(mode.r_samples, 1);
        uint64_t configs = perms.size() * rs;
        stats.resize(configs);
        parallel_for(configs, mode.threads, [&](uint64_t c) {
            const Permutation &perm = perms[c / rs];
            Coins r = root.sub(1).sub(c % rs);
            Preparation prep = inv.prepare(perm, r);
            TrialStats t;
            for (uint64_t x = 0; x < xs; x++) {
                SingleRun run = run_single(inv, perm, r, prep, x);
                t.value += run.success;
                if (run.outcome.verified_probability) {
                    t.has_verified = true;
                    t.verified += *run.outcome.verified_probability;
                }
                t.queries = std::max(t.queries, run.queries);
                t.calls = std::max(t.calls, run.oracle_calls);
                t.advice = std::max(t.advice, run.advice_qubits);
            }
            t.value /= static_cast<double>(xs);
            t.verified /= static_cast<double>(xs);
            stats[c] = t;
        });
        res.configurations = configs;
    } else {
        if (mode.trials == 0) {
            throw ContractViolation("sampled evaluation needs at least one trial");
        }
        stats.resize(mode.trials);
        parallel_for(mode.trials, mode.threads, [&](uint64_t i) {
            Coins c = root.sub(2).sub(i);
            auto perm = Permutation::random(n, c.sub(0).seed);
            Coins r = c.sub(1);
            uint64_t x = c.sub(2).rng().uniform_below(xs);
            SingleRun run = run_single(inv, perm, r, x);
            Rng measure = c.sub(3).rng();
            TrialStats t;
            t.value = sample_index(run.outcome.distribution, measure) == run.answer ? 1.0 : 0.0;
            if (run.outcome.verified_probability) {
                t.has_verified = true;
                t.verified = *run.outcome.verified_probability;
            }
            t.queries = run.queries;
            t.calls = run.oracle_calls;
            t.advice = run.advice_qubits;
            stats[i] = t;
        });
        res.trials = mode.trials;
    }

    double sum_sq = 0, verified_sum = 0;
    bool any_verified = false;
    for (const auto &t : stats) {
        merge(t, res, sum_sq, verified_sum, any_verified);
    }
    double count = static_cast<double>(stats.size());
    res.success_probability /= count;
    double var = std::max(0.0, sum_sq / count - res.success_probability * res.success_probability);
    res.std_error = count > 1 ? std::sqrt(var / (count - 1)) : 0.0;
    if (any_verified) {
        res.verified_probability = verified_sum / count;
    }
    return res;
}

}  // namespace

ExperimentResult run_search_experiment(const InverterSpec &inv, const EvalMode &mode) {
    return run_experiment(inv, mode, InverterKind::search);
}

ExperimentResult run_decision_experiment(const InverterSpec &inv, const EvalMode &mode) {
    return run_experiment(inv, mode, InverterKind::decision);
}

std::vector<double> per_preimage_success(
    const InverterSpec &inv, const Permutation &perm, uint64_t r_samples, uint64_t seed, int threads) {
    inv.validate();
    uint64_t xs = 1ULL << (inv.n_bits - inv.adaptive_bits);
    std::vector<std::vector<double>> per_r(r_samples);
    parallel_for(r_samples, threads, [&](uint64_t k) {
        Coins r = Coins{seed}.sub(k);
        Preparation prep = inv.prepare(perm, r);
        per_r[k].resize(xs);
        for (uint64_t x = 0; x < xs; x++) {
            per_r[k][x] = run_single(inv, perm, r, prep, x).success;
        }
    });
    std::vector<double> out(xs, 0.0);
    for (const auto &v : per_r) {
        for (uint64_t x = 0; x < xs; x++) {
            out[x] += v[x];
        }
    }
    for (auto &v : out) {
        v /= static_cast<double>(std::max<uint64_t>(r_samples, 1));
    }
    return out;
}

}  // namespace perminv
