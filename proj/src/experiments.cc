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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

#include "perminv/amplify.h"
#include "perminv/bounds.h"
#include "perminv/errors.h"
#include "perminv/harness.h"
#include "perminv/parallel.h"
#include "perminv/qrac.h"
#include "perminv/reduce.h"

namespace perminv {

namespace {

using Kind = ParamSpec::Kind;

ParamSpec int_param(std::string name, int64_t lo, int64_t hi, int64_t def) {
    return ParamSpec{std::move(name), Kind::integer, static_cast<double>(lo), static_cast<double>(hi), def, {}};
}
ParamSpec real_param(std::string name, double lo, double hi, double def) {
    return ParamSpec{std::move(name), Kind::real, lo, hi, def, {}};
}
ParamSpec choice_param(std::string name, std::vector<std::string> choices) {
    std::string def = choices.front();
    return ParamSpec{std::move(name), Kind::string, 0, 0, def, std::move(choices)};
}

ResultRow new_row(const ExperimentConfig &cfg) {
    ResultRow r;
    r.config = cfg.to_json();
    r.version = version_string();
    return r;
}

EvalMode eval_mode(const ExperimentConfig &cfg, uint64_t perm_samples, uint64_t r_samples = 1) {
    EvalMode m;
    m.kind = cfg.mode;
    m.seed = cfg.seed;
    m.trials = cfg.trials;
    m.perm_samples = perm_samples;
    m.r_samples = r_samples;
    m.threads = cfg.threads;
    return m;
}

/// Pr[Bin(n, p) > t], summed in log space.
double binomial_tail_above(uint64_t n, double p, double t) {
    double total = 0;
    for (uint64_t k = 0; k <= n; k++) {
        if (static_cast<double>(k) <= t) {
            continue;
        }
        double lp = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        if (p > 0) {
            lp += static_cast<double>(k) * std::log(p);
        } else if (k > 0) {
            continue;
        }
        if (p < 1) {
            lp += static_cast<double>(n - k) * std::log1p(-p);
        } else if (k < n) {
            continue;
        }
        total += std::exp(lp);
    }
    return std::min(total, 1.0);
}

double quantile(std::vector<double> sorted, double q) {
    if (sorted.empty()) {
        return 0;
    }
    std::sort(sorted.begin(), sorted.end());
    auto idx = static_cast<size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
    return sorted[idx];
}

void fetch_max(std::atomic<uint64_t> &slot, uint64_t v) {
    uint64_t cur = slot.load();
    while (v > cur && !slot.compare_exchange_weak(cur, v)) {
    }
}

// ---- grover_sweep ----------------------------------------------------------------

std::vector<ResultRow> grover_sweep(const ExperimentConfig &cfg) {
    int n = cfg.n_bits;
    double theta = std::asin(1 / std::sqrt(std::ldexp(1.0, n)));
    int64_t k_max = cfg.integer("k_max");
    if (k_max < 0) {
        k_max = static_cast<int64_t>(std::floor(std::numbers::pi * std::sqrt(std::ldexp(1.0, n)) / 4));
    }
    std::vector<ResultRow> rows;
    for (int k = 0; k <= k_max; k++) {
        auto res = run_search_experiment(grover_spi(n, k), eval_mode(cfg, cfg.integer("perm_samples")));
        ResultRow row = new_row(cfg);
        row.value("k", k);
        row.probability("success", res.success_probability);
        row.value("std_error", res.std_error);
        row.value("queries_used", res.queries_used);
        row.bound("closed_form", std::pow(std::sin((2 * k + 1) * theta), 2), "sin^2((2k+1) asin(1/sqrt(N)))");
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---- search_amplification ------------------------------------------------------

std::vector<ResultRow> search_amplification(const ExperimentConfig &cfg) {
    int n = cfg.n_bits;
    double eps = cfg.real("epsilon");
    auto dummy = static_cast<uint64_t>(cfg.integer("dummy_queries"));
    auto base = synthetic_spi(n, eps, dummy, BiasSource::measurement);
    std::vector<ResultRow> rows;
    for (int ell = 1; ell <= cfg.integer("ell_max"); ell++) {
        auto amp = amplify_search(base, ell);
        auto res = run_search_experiment(amp, eval_mode(cfg, cfg.integer("perm_samples")));
        double miss = std::pow(1 - eps, ell);
        ResultRow row = new_row(cfg);
        row.value("ell", ell);
        row.probability("success", res.success_probability);
        row.probability("verified_probability", res.verified_probability.value_or(0));
        row.value("std_error", res.std_error);
        row.value("queries_used", res.queries_used);
        row.value("advice_qubits_used", res.advice_qubits_used);
        row.value("declared_S", amp.advice_qubits);
        row.value("declared_T", amp.query_budget);
        row.value("resources_match",
            amp.advice_qubits == ell * base.advice_qubits && amp.query_budget == ell * (base.query_budget + 1) &&
                res.queries_used == amp.query_budget && res.advice_qubits_used == amp.advice_qubits);
        row.bound("verified", 1 - miss, "1 - (1 - eps)^l");
        row.bound("end_to_end", 1 - miss * (1 - std::ldexp(1.0, -n)), "1 - (1 - eps)^l (1 - 2^-n)");
        row.bound("S", static_cast<double>(ell * base.advice_qubits), "l S");
        row.bound("T", static_cast<double>(ell * (base.query_budget + 1)), "l (T + 1)");
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---- restricted_amplification -------------------------------------------------

std::vector<ResultRow> restricted_amplification(const ExperimentConfig &cfg) {
    int n = cfg.n_bits;
    double eps = cfg.real("epsilon");
    auto base = synthetic_spi(n, eps, static_cast<uint64_t>(cfg.integer("dummy_queries")), BiasSource::shared_randomness);
    auto ra = amplify_search_restricted(base, eps);
    Coins root{cfg.seed};
    uint64_t perms = static_cast<uint64_t>(cfg.integer("perm_samples"));
    uint64_t r_samples = static_cast<uint64_t>(cfg.integer("r_samples"));
    uint64_t good = 0, total = 0;
    double mean_success = 0;
    for (uint64_t k = 0; k < perms; k++) {
        auto perm = Permutation::random(n, root.sub(0).sub(k).seed);
        auto success = per_preimage_success(ra.inverter, perm, r_samples, root.sub(1).sub(k).seed, cfg.threads);
        for (double s : success) {
            good += s >= ra.success_level - 1e-12 ? 1 : 0;
            mean_success += s;
            total++;
        }
    }
    auto single = run_single(ra.inverter, Permutation::random(n, root.sub(2).seed), root.sub(3), 0);
    ResultRow row = new_row(cfg);
    row.value("ell", ra.ell);
    row.probability("pair_fraction", static_cast<double>(good) / static_cast<double>(total));
    row.probability("mean_success", mean_success / static_cast<double>(total));
    row.value("queries_protocol", ra.queries_protocol);
    row.value("queries_alternative", ra.queries_alternative);
    row.value("queries_used", single.queries);
    row.bound("pair_fraction", ra.pair_fraction, "Pr_{pi,y}[Pr_r[success] >= 2/3] >= 0.2");
    row.bound("ell", std::ceil(std::log(10.0) / eps), "ceil(ln 10 / eps)");
    row.bound("amplified_success", 1 - std::pow(1 - eps, ra.ell), "1 - (1 - eps)^l");
    return {row};
}

// ---- decision_amplification ----------------------------------------------------

std::vector<ResultRow> decision_amplification(const ExperimentConfig &cfg) {
    int n = cfg.n_bits;
    double delta = cfg.real("delta");
    auto base = synthetic_dpi(n, delta, 0, BiasSource::measurement);
    int64_t lo = cfg.integer("ell_min"), hi = cfg.integer("ell_max"), step = cfg.integer("ell_step");
    if (lo % 2 == 0 || step % 2 != 0) {
        throw ConfigError("params.ell_min/ell_step: the sweep must stay on odd l (ties are resolved to 0)");
    }
    std::vector<ResultRow> rows;
    for (int64_t ell = lo; ell <= hi; ell += step) {
        auto res = run_decision_experiment(amplify_decision(base, static_cast<int>(ell)), eval_mode(cfg, cfg.integer("perm_samples")));
        double exact = binomial_tail_above(static_cast<uint64_t>(ell), 0.5 + delta, static_cast<double>(ell) / 2);
        double chern = 1 - std::exp(-delta * delta * static_cast<double>(ell) / (1 + 2 * delta));
        ResultRow row = new_row(cfg);
        row.value("ell", ell);
        row.probability("success", res.success_probability);
        row.value("std_error", res.std_error);
        row.value("queries_used", res.queries_used);
        row.value("above_chernoff", res.success_probability >= chern - 1e-12);
        row.bound("binomial_tail", exact, "Pr[Bin(l, 1/2 + delta) > l/2]");
        row.bound("chernoff", chern, "1 - exp(-delta^2 l / (1 + 2 delta))");
        rows.push_back(std::move(row));
    }
    ResultRow req = new_row(cfg);
    double target = cfg.real("target_failure");
    uint64_t need = required_ell_decision(delta, target);
    req.value("required_ell", need);
    req.bound("required_ell_failure", std::exp(-delta * delta * static_cast<double>(need) / (1 + 2 * delta)),
        "exp(-delta^2 l / (1 + 2 delta)) at the returned l");
    rows.push_back(std::move(req));
    return rows;
}

// ---- search_to_decision ----------------------------------------------------------

std::vector<ResultRow> search_to_decision(const ExperimentConfig &cfg) {
    int n = cfg.n_bits;
    bool perfect = cfg.text("dpi") == "perfect";
    double delta = perfect ? 0.5 : cfg.real("delta");
    auto dpi = synthetic_dpi(n, delta, static_cast<uint64_t>(cfg.integer("dummy_queries")), BiasSource::measurement);
    double per_bit = cfg.real("target_failure") / n;
    int ell = cfg.integer("ell") > 0 ? static_cast<int>(cfg.integer("ell"))
                                     : static_cast<int>(required_ell_decision(delta, per_bit));
    if (ell % 2 == 0) {
        ell += 1;
    }
    auto spi = search_from_decision(dpi, ell);
    auto res = run_search_experiment(spi, eval_mode(cfg, cfg.integer("perm_samples")));
    ResultRow row = new_row(cfg);
    row.value("ell", ell);
    row.probability("success", res.success_probability);
    row.value("std_error", res.std_error);
    row.value("queries_used", res.queries_used);
    row.value("advice_qubits_used", res.advice_qubits_used);
    row.value("resources_match", spi.advice_qubits == static_cast<uint64_t>(n * ell) * dpi.advice_qubits &&
                                     spi.query_budget == static_cast<uint64_t>(n * ell) * dpi.query_budget &&
                                     res.queries_used == spi.query_budget);
    row.bound("S", static_cast<double>(n * ell) * static_cast<double>(dpi.advice_qubits), "n l S");
    row.bound("T", static_cast<double>(n * ell) * static_cast<double>(dpi.query_budget), "n l T");
    row.bound("success", perfect ? 1.0 : 1 - n * binomial_tail_above(ell, 0.5 - delta, static_cast<double>(ell) / 2 - 1e-9),
        perfect ? "1 (perfect decision inverter)" : "1 - n Pr[Bin(l, 1/2 - delta) >= l/2] (union bound)");
    return {row};
}

// ---- unique_search ---------------------------------------------------------------

std::vector<ResultRow> unique_search(const ExperimentConfig &cfg) {
    int domain = static_cast<int>(cfg.integer("domain_bits"));
    int m = static_cast<int>(cfg.integer("m"));
    int n = domain + m + 1;
    if (n > 10) {
        throw ConfigError("params.domain_bits: domain_bits + m + 1 must be at most 10");
    }
    auto adpi = exhaustive_adpi(n, m);
    std::vector<UniqueSearchInstance> yes, no;
    for (uint64_t i = 0; i < (1ULL << domain); i++) {
        yes.push_back(UniqueSearchInstance{domain, i});
    }
    no.push_back(UniqueSearchInstance{domain, std::nullopt});
    std::atomic<uint64_t> max_f{0}, max_h{0}, violations{0};
    auto algorithm = [&](const UniqueSearchInstance &inst, uint64_t seed) {
        auto run = unique_search_from_adpi(adpi, inst, seed);
        fetch_max(max_f, run.f_queries);
        fetch_max(max_h, run.h_queries);
        if (run.f_queries > 2 * run.query_budget) {
            violations++;
        }
        return run.yes;
    };
    auto err = measure_distributional_error(algorithm, yes, no, cfg.trials, cfg.seed, cfg.threads);
    ResultRow row = new_row(cfg);
    row.value("n_bits_inverter", n);
    row.probability("no_error", err.p0);
    row.probability("yes_error", err.p1);
    row.value("no_error_se", err.se0);
    row.value("yes_error_se", err.se1);
    row.value("max_f_queries", max_f.load());
    row.value("max_h_queries", max_h.load());
    row.value("f_budget_violations", violations.load());
    row.bound("f_queries", static_cast<double>(2 * adpi.query_budget), "2 T");
    row.bound("no_error", 0.0, "1/2 - delta, delta = 1/2 for an exhaustive inverter");
    row.bound("yes_error", 0.5, "1/2");
    return {row};
}

// ---- swapping_lemma --------------------------------------------------------------

std::vector<ResultRow> swapping_lemma(const ExperimentConfig &cfg) {
    int n = cfg.n_bits;
    uint64_t count = static_cast<uint64_t>(cfg.integer("count"));
    int max_q = static_cast<int>(cfg.integer("max_queries"));
    std::vector<SwappingReport> reports(count);
    Coins root{cfg.seed};
    parallel_for(count, cfg.threads, [&](uint64_t i) {
        Coins c = root.sub(i);
        Rng rng = c.sub(0).rng();
        int q = 1 + static_cast<int>(rng.uniform_below(static_cast<uint64_t>(max_q)));
        uint64_t size = 1ULL << n;
        std::vector<uint64_t> f(size), g(size);
        for (uint64_t x = 0; x < size; x++) {
            f[x] = rng.uniform_below(size);
        }
        std::vector<bool> in_s(size);
        do {
            for (uint64_t x = 0; x < size; x++) {
                in_s[x] = rng.coin();
            }
        } while (std::none_of(in_s.begin(), in_s.end(), [](bool b) {
            return b;
        }));
        for (uint64_t x = 0; x < size; x++) {
            g[x] = in_s[x] ? f[x] ^ (1 + rng.uniform_below(size - 1)) : f[x];
        }
        auto circuit = random_query_circuit(n, q, c.sub(1).seed);
        reports[i] = swapping_check(circuit, ClassicalFunctionTable(n, n, f), ClassicalFunctionTable(n, n, g),
            static_cast<uint64_t>(q));
    });
    uint64_t literal = 0, hybrid = 0;
    std::vector<double> tight;
    double max_distance = 0;
    for (const auto &r : reports) {
        literal += r.holds ? 0 : 1;
        hybrid += r.holds_hybrid ? 0 : 1;
        tight.push_back(r.tightness);
        max_distance = std::max(max_distance, r.distance);
    }
    ResultRow row = new_row(cfg);
    row.value("triples", count);
    row.value("literal_bound_violations", literal);
    row.value("hybrid_bound_violations", hybrid);
    row.value("max_distance", max_distance);
    for (double q : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
        row.value("tightness_q" + std::to_string(static_cast<int>(q * 100)), quantile(tight, q));
    }
    row.bound("literal", 1.0, "distance <= sqrt(T q)");
    row.bound("hybrid", 1.0, "distance <= 2 sqrt(T q)");
    return {row};
}

// ---- qrac_roundtrip --------------------------------------------------------------

std::vector<ResultRow> qrac_roundtrip(const ExperimentConfig &cfg) {
    int n = cfg.n_bits;
    QracParams p;
    p.gamma = cfg.real("gamma");
    p.c = cfg.real("c");
    bool grover = cfg.text("inverter") == "grover";
    p.inverter = grover ? grover_spi(n, static_cast<int>(cfg.integer("grover_iterations"))) : full_table_spi(n);
    p.rho_copies = cfg.integer("rho") > 0 ? static_cast<uint64_t>(cfg.integer("rho"))
                                           : default_rho(n, cfg.real("rho_constant"));
    p.r_samples = static_cast<uint64_t>(cfg.integer("r_samples"));
    if (cfg.real("inclusion_probability") > 0) {
        p.inclusion_probability = cfg.real("inclusion_probability");
    }
    Coins root{cfg.seed};
    p.epsilon = measure_inverted_fraction(
        p.inverter, static_cast<uint64_t>(cfg.integer("epsilon_perm_samples")), p.r_samples, root.sub(0).seed, cfg.threads);
    p.validate();

    struct SeedStats {
        int case_flag = 1;
        uint64_t length = 0;
        bool length_ok = true;
        uint64_t good = 0;
        uint64_t queries = 0;
        uint64_t failures = 0;
        uint64_t queries_on_g = 0;
        uint64_t failures_on_g = 0;
        double max_linkage = 0;
    };
    uint64_t seeds = static_cast<uint64_t>(cfg.integer("encode_seeds"));
    uint64_t per_seed = static_cast<uint64_t>(cfg.integer("queries_per_seed"));
    uint64_t size = 1ULL << n;
    std::vector<SeedStats> stats(seeds);
    parallel_for(seeds, cfg.threads, [&](uint64_t s) {
        auto perm = Permutation::random(n, root.sub(1).sub(s).seed);
        Coins R = root.sub(2).sub(s);
        QracEncoding enc = encode(perm, p, R);
        SeedStats st;
        st.case_flag = enc.case_flag;
        st.length = enc.length_bits;
        st.good = enc.good_size;
        uint64_t formula = qrac_length_formula(
            enc.case_flag, n, enc.subset_size, enc.good_size, p.rho_copies, p.inverter.advice_qubits);
        QracEncoding wire = deserialize_encoding(serialize_encoding(enc));
        st.length_ok = payload_length_bits(enc) == formula && enc.length_bits == formula && wire.length_bits == formula;
        std::vector<bool> in_g(size, false);
        for (uint64_t x : enc.good_set) {
            in_g[x] = true;
        }
        for (uint64_t q = 0; q < per_seed; q++) {
            uint64_t y = root.sub(3).sub(s).sub(q).rng().uniform_below(size);
            bool wrong = decode(wire, y, p, R, q) != perm.inverse(y);
            st.queries++;
            st.failures += wrong;
            if (in_g[perm.inverse(y)]) {
                st.queries_on_g++;
                st.failures_on_g += wrong;
            }
        }
        if (grover) {
            for (uint64_t x : enc.good_set) {
                st.max_linkage = std::max(st.max_linkage, linkage_distance(perm, p.inverter, enc.good_set, x, R.sub(0)));
            }
        }
        stats[s] = st;
    });

    uint64_t case2 = 0, length_bad = 0, queries = 0, failures = 0, q_g = 0, f_g = 0;
    double length_sum = 0, good_sum = 0, max_link = 0;
    for (const auto &st : stats) {
        case2 += st.case_flag == 2;
        length_bad += st.length_ok ? 0 : 1;
        length_sum += static_cast<double>(st.length);
        good_sum += static_cast<double>(st.good);
        queries += st.queries;
        failures += st.failures;
        q_g += st.queries_on_g;
        f_g += st.failures_on_g;
        max_link = std::max(max_link, st.max_linkage);
    }
    double log_fact = static_cast<double>(bits_for_count(arrangement_count(size, size)));
    auto majority = chernoff_majority_tail(p.rho_copies, 0.6);
    ResultRow row = new_row(cfg);
    row.probability("epsilon_measured", p.epsilon);
    row.value("rho", p.rho_copies);
    row.value("encodings", seeds);
    row.probability("case2_fraction", static_cast<double>(case2) / static_cast<double>(seeds));
    row.value("mean_good_size", good_sum / static_cast<double>(seeds));
    row.value("mean_length_bits", length_sum / static_cast<double>(seeds));
    row.value("length_mismatches", length_bad);
    row.value("decode_queries", queries);
    row.probability("failure_rate", static_cast<double>(failures) / static_cast<double>(queries));
    row.value("decode_queries_on_good_set", q_g);
    row.value("decode_failures_on_good_set", f_g);
    row.value("max_linkage_distance", max_link);
    row.bound("majority_tail", majority.bound_value, "exp(-rho (p - 1/2)^2 / (2 p)), p = 0.6");
    row.bound("log2_factorial", log_fact, "ceil(log2 N!) (length lower bound reference, not asserted)");
    row.bound("case2_threshold", p.case2_threshold(), "(eps gamma N / (4 T^2)) (1 - 5 gamma^2 / c)");
    row.bound("linkage_literal", std::sqrt(p.c), "sqrt(c)");
    row.bound("linkage_hybrid", 2 * std::sqrt(p.c), "2 sqrt(c)");
    row.bound("case2_rate_reference", 0.4 * p.epsilon, "0.4 eps (asymptotic, not asserted)");
    return {row};
}

// ---- tail_bounds -----------------------------------------------------------------

std::vector<ResultRow> tail_bounds(const ExperimentConfig &cfg) {
    std::vector<ResultRow> rows;
    auto bn = static_cast<uint64_t>(cfg.integer("binomial_n"));
    double p = cfg.real("p");
    double delta = cfg.real("delta");
    double theta = cfg.real("theta");
    {
        auto b = chernoff_lower_tail(bn, p, delta);
        double mu = static_cast<double>(bn) * p;
        double cut = (1 - delta) * mu;
        // Pr[X < cut] = 1 - Pr[X >= cut].
        double below = 1 - binomial_tail_above(bn, p, std::ceil(cut - 1e-12) - 0.5);
        ResultRow row = new_row(cfg);
        row.value("check", "chernoff_lower_tail");
        row.probability("exact", std::max(0.0, below));
        row.value("holds", below <= b.bound_value + 1e-12);
        row.bound("chernoff", b.bound_value, "2 exp(-delta^2 n p / 2)");
        rows.push_back(std::move(row));
    }
    {
        auto b = chernoff_majority_tail(bn, p);
        double at_most_half = 1 - binomial_tail_above(bn, p, static_cast<double>(bn) / 2);
        ResultRow row = new_row(cfg);
        row.value("check", "chernoff_majority_tail");
        row.probability("exact", std::max(0.0, at_most_half));
        row.value("holds", at_most_half <= b.bound_value + 1e-12);
        row.bound("chernoff_majority", b.bound_value, "exp(-n (p - 1/2)^2 / (2 p))");
        rows.push_back(std::move(row));
    }
    uint64_t tables = static_cast<uint64_t>(cfg.integer("tables"));
    Coins root{cfg.seed};
    uint64_t markov_bad = 0, averaging_bad = 0;
    for (uint64_t t = 0; t < tables; t++) {
        Rng rng = root.sub(t).rng();
        uint64_t support = 2 + rng.uniform_below(15);
        std::vector<double> values(support), weights(support);
        double wsum = 0;
        for (uint64_t i = 0; i < support; i++) {
            values[i] = rng.uniform01();
            weights[i] = rng.uniform01() + 1e-3;
            wsum += weights[i];
        }
        double mean = 0, tail = 0;
        for (uint64_t i = 0; i < support; i++) {
            mean += values[i] * weights[i] / wsum;
            tail += values[i] >= theta ? weights[i] / wsum : 0;
        }
        if (tail + 1e-12 < reverse_markov(mean, theta).bound_value) {
            markov_bad++;
        }
        std::vector<double> table(support);
        for (uint64_t i = 0; i < support; i++) {
            table[i] = values[i];
        }
        double avg = 0;
        for (double v : table) {
            avg += v / static_cast<double>(support);
        }
        double eps = avg * rng.uniform01();
        auto sub = averaging_subset(table, eps, theta);
        if (static_cast<double>(sub.size()) + 1e-9 < (1 - theta) * eps * static_cast<double>(support)) {
            averaging_bad++;
        }
    }
    ResultRow row = new_row(cfg);
    row.value("check", "reverse_markov_and_averaging_subset");
    row.value("tables", tables);
    row.value("reverse_markov_violations", markov_bad);
    row.value("averaging_subset_violations", averaging_bad);
    row.value("holds", markov_bad == 0 && averaging_bad == 0);
    row.bound("reverse_markov", 0, "Pr[X >= theta] >= (E[X] - theta) / (1 - theta)");
    row.bound("averaging_subset", 0, "|X_theta| >= (1 - theta) eps |X|");
    rows.push_back(std::move(row));
    return rows;
}

// ---- decision_baseline -----------------------------------------------------------

std::vector<ResultRow> decision_baseline(const ExperimentConfig &cfg) {
    int n = cfg.n_bits;
    double delta = cfg.real("delta");
    struct Entry {
        InverterSpec inv;
        double expect;
        std::string formula;
    };
    std::vector<Entry> entries = {
        {full_table_dpi(n), 1.0, "1 (full first-bit table)"},
        {constant_dpi(n, 0), 0.5, "1/2 (constant answer)"},
        {synthetic_dpi(n, delta, 0, BiasSource::measurement), 0.5 + delta, "1/2 + delta"},
    };
    std::vector<ResultRow> rows;
    for (const auto &e : entries) {
        auto res = run_decision_experiment(e.inv, eval_mode(cfg, cfg.integer("perm_samples")));
        ResultRow row = new_row(cfg);
        row.value("inverter", e.inv.name);
        row.probability("success", res.success_probability);
        row.value("std_error", res.std_error);
        row.bound("success", e.expect, e.formula);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ExperimentInfo> build_registry() {
    using K = EvalMode::Kind;
    std::vector<ExperimentInfo> r;
    r.push_back({"grover_sweep", "Grover inversion success for k = 0..k_max against the closed form", 1, 8, 4, 1000,
        {K::exact, K::sampled}, {int_param("k_max", -1, 1000, -1), int_param("perm_samples", 1, 1000, 2)},
        {"grover_spi", "run_search_experiment"}, grover_sweep});
    r.push_back({"search_amplification", "l-fold repetition of a synthetic search inverter", 1, 6, 3, 1000,
        {K::exact, K::sampled},
        {real_param("epsilon", 0, 1, 0.25), int_param("ell_max", 1, 16, 8), int_param("dummy_queries", 0, 8, 1),
            int_param("perm_samples", 1, 1000, 2)},
        {"amplify_search", "synthetic_spi", "run_search_experiment"}, search_amplification});
    r.push_back({"restricted_amplification", "ceil(ln10/eps) repetitions against the restricted target", 1, 6, 3,
        1000, {K::exact},
        {real_param("epsilon", 0.01, 1, 0.2), int_param("dummy_queries", 0, 8, 0), int_param("perm_samples", 1, 100, 2),
            int_param("r_samples", 1, 4096, 32)},
        {"amplify_search_restricted", "per_preimage_success"}, restricted_amplification});
    r.push_back({"decision_amplification", "majority vote over l synthetic decision inverters", 1, 6, 3, 1000,
        {K::exact, K::sampled},
        {real_param("delta", 0.001, 0.5, 0.1), int_param("ell_min", 1, 1001, 1), int_param("ell_max", 1, 1001, 25),
            int_param("ell_step", 2, 1000, 2), int_param("perm_samples", 1, 1000, 1),
            real_param("target_failure", 1e-12, 0.5, 0.01)},
        {"amplify_decision", "required_ell_decision", "run_decision_experiment"}, decision_amplification});
    r.push_back({"search_to_decision", "bitwise search from an amplified decision inverter", 2, 6, 4, 1000,
        {K::sampled, K::exact},
        {choice_param("dpi", {"synthetic", "perfect"}), real_param("delta", 0.01, 0.5, 0.25),
            real_param("target_failure", 1e-9, 0.5, 0.01), int_param("ell", 0, 1001, 0),
            int_param("dummy_queries", 0, 8, 1), int_param("perm_samples", 1, 1000, 1)},
        {"search_from_decision", "required_ell_decision", "amplify_decision"}, search_to_decision});
    r.push_back({"unique_search", "UNIQUESEARCH decided through an adaptive decision inverter", 1, 10, 6, 1000,
        {K::sampled}, {int_param("domain_bits", 1, 8, 4), int_param("m", 0, 4, 1)},
        {"unique_search_from_adpi", "measure_distributional_error", "build_unique_search_oracles"}, unique_search});
    r.push_back({"swapping_lemma", "final-state distance against sqrt(T q) on random query circuits", 1, 4, 3, 1000,
        {K::exact}, {int_param("count", 1, 100000, 100), int_param("max_queries", 1, 16, 4)},
        {"swapping_check", "random_query_circuit", "total_query_magnitude"}, swapping_lemma});
    r.push_back({"qrac_roundtrip", "encode/decode round trips of the permutation code", 1, 4, 3, 1000, {K::exact},
        {choice_param("inverter", {"grover", "full_table"}), int_param("grover_iterations", 0, 8, 1),
            real_param("gamma", 1e-6, 0.999999, 0.5), real_param("c", 1e-6, 0.999999, 0.3),
            int_param("rho", 0, 10000, 0), real_param("rho_constant", 0.01, 1000, 25),
            int_param("encode_seeds", 1, 100000, 100), int_param("queries_per_seed", 1, 100000, 100),
            int_param("r_samples", 1, 4096, 1), int_param("epsilon_perm_samples", 1, 1000, 10),
            real_param("inclusion_probability", -1, 1, -1)},
        {"sample_subset_R", "good_set_G", "encode", "decode", "build_qrac_decode_oracle", "chernoff_majority_tail"},
        qrac_roundtrip});
    r.push_back({"ow_qccra2_rp", "OW-QCCRA2 game against the random-permutation scheme", 1, 5, 4, 10000,
        {K::sampled},
        {choice_param("adversary", {"random_guess", "ciphertext_probe", "full_key"}), int_param("probes", 0, 64, 4)},
        {"ow_qccra2_rp_experiment"}, [](const ExperimentConfig &c) {
            return std::vector<ResultRow>{ow_qccra2_rp_experiment(c)};
        }});
    r.push_back({"tail_bounds", "Chernoff, reverse Markov and averaging bounds against exact enumeration", 1, 10, 3,
        1000, {K::exact},
        {int_param("binomial_n", 1, 100000, 200), real_param("p", 0.001, 0.999, 0.6),
            real_param("delta", 0.001, 0.999, 0.1), real_param("theta", 0.001, 0.999, 0.5),
            int_param("tables", 1, 1000000, 1000)},
        {"chernoff_lower_tail", "chernoff_majority_tail", "reverse_markov", "averaging_subset"}, tail_bounds});
    r.push_back({"decision_baseline", "baseline decision inverters", 1, 8, 3, 1000, {K::exact, K::sampled},
        {real_param("delta", 0, 0.5, 0.25), int_param("perm_samples", 1, 1000, 4)},
        {"full_table_dpi", "constant_dpi", "synthetic_dpi", "run_decision_experiment"}, decision_baseline});
    return r;
}

}  // namespace

const std::vector<ExperimentInfo> &experiment_registry() {
    static const std::vector<ExperimentInfo> registry = build_registry();
    return registry;
}

// ---- OW-QCCRA2 -------------------------------------------------------------------

namespace {

/// Enc_k(m; r) = pi(m || r), Dec_k(c) = first n bits of pi^{-1}(c), served
/// classically with per-phase query counters. After the challenge the
/// decryption oracle rejects c.
class RpChallenger {
   public:
    RpChallenger(int n, Permutation pi) : n_(n), pi_(std::move(pi)) {
    }
    uint64_t enc(uint64_t m, uint64_t r) {
        enc_queries_++;
        return pi_((m << n_) | r);
    }
    std::optional<uint64_t> dec(uint64_t c) {
        dec_queries_++;
        if (challenge_ && *challenge_ == c) {
            return std::nullopt;
        }
        return pi_.inverse(c) >> n_;
    }
    uint64_t challenge(uint64_t b, uint64_t mu, uint64_t r) {
        uint64_t c = pi_((((b << (n_ - 1)) | mu) << n_) | r);
        challenge_ = c;
        return c;
    }
    uint64_t queries() const {
        return enc_queries_ + dec_queries_;
    }
    void reset_counts() {
        enc_queries_ = dec_queries_ = 0;
    }
    const Permutation &key() const {
        return pi_;
    }

   private:
    int n_;
    Permutation pi_;
    std::optional<uint64_t> challenge_;
    uint64_t enc_queries_ = 0;
    uint64_t dec_queries_ = 0;
};

struct GameOutcome {
    bool won = false;
    uint64_t phase1_queries = 0;
    uint64_t phase2_queries = 0;
    bool puncture_held = true;
};

GameOutcome play(const std::string &adversary, int n, uint64_t probes, const Coins &trial) {
    RpChallenger ch(n, Permutation::random(2 * n, trial.sub(0).seed));
    Rng adv = trial.sub(1).rng();
    Rng coins = trial.sub(2).rng();
    uint64_t mu_range = 1ULL << (n - 1);
    GameOutcome out;

    // Phase 1: none of the registered adversaries needs pre-challenge queries.
    uint64_t mu = adv.uniform_below(mu_range);
    out.phase1_queries = ch.queries();
    ch.reset_counts();

    uint64_t b = coins.coin() ? 1 : 0;
    uint64_t r = coins.uniform_below(1ULL << n);
    uint64_t c = ch.challenge(b, mu, r);

    uint64_t guess = 0;
    if (adversary == "random_guess") {
        guess = adv.coin() ? 1 : 0;
    } else if (adversary == "ciphertext_probe") {
        auto direct = ch.dec(c);
        if (direct) {
            out.puncture_held = false;
            guess = *direct >> (n - 1);
        } else {
            guess = adv.coin() ? 1 : 0;
            for (uint64_t i = 0; i < probes; i++) {
                uint64_t bt = adv.coin() ? 1 : 0;
                uint64_t ct = 0;
                do {
                    ct = ch.enc((bt << (n - 1)) | mu, adv.uniform_below(1ULL << n));
                } while (ct == c);
                auto plain = ch.dec(ct);
                if (!plain) {
                    out.puncture_held = false;
                    continue;
                }
                // The plaintext is b~ || mu by construction; the guess is the
                // last probe's own bit, independent of the challenge.
                guess = *plain >> (n - 1);
            }
        }
    } else if (adversary == "full_key") {
        guess = ch.key().inverse(c) >> (2 * n - 1);
    } else {
        throw ConfigError("params.adversary: unknown adversary '" + adversary + "'");
    }
    out.phase2_queries = ch.queries();
    out.won = guess == b;
    return out;
}

}  // namespace

ResultRow ow_qccra2_rp_experiment(const ExperimentConfig &cfg) {
    int n = cfg.n_bits;
    if (n < 1 || 2 * n > 24) {
        throw ConfigError("n_bits: the RP scheme needs 1 <= n <= 12");
    }
    std::string adversary = cfg.text("adversary");
    auto probes = static_cast<uint64_t>(cfg.integer("probes"));
    std::vector<GameOutcome> outcomes(cfg.trials);
    Coins root{cfg.seed};
    parallel_for(cfg.trials, cfg.threads, [&](uint64_t t) {
        outcomes[t] = play(adversary, n, probes, root.sub(t));
    });
    uint64_t wins = 0, p1 = 0, p2 = 0, broken = 0;
    for (const auto &o : outcomes) {
        wins += o.won;
        p1 = std::max(p1, o.phase1_queries);
        p2 = std::max(p2, o.phase2_queries);
        broken += o.puncture_held ? 0 : 1;
    }
    double trials = static_cast<double>(cfg.trials);
    double success = static_cast<double>(wins) / trials;
    double sigma = std::sqrt(0.25 / trials);
    ResultRow row = new_row(cfg);
    row.value("adversary", adversary);
    row.value("permutation_bits", 2 * n);
    row.probability("success", success);
    row.value("std_error", std::sqrt(success * (1 - success) / trials));
    row.value("z_vs_half", (success - 0.5) / sigma);
    row.value("phase1_queries", p1);
    row.value("phase2_queries", p2);
    row.value("puncture_failures", broken);
    double ell = static_cast<double>(p2);
    row.bound("guess", 0.5, "1/2");
    row.bound("delta_annotation", ell * ell * std::ldexp(1.0, n - 1) / std::ldexp(1.0, 2 * n),
        "l^2 2^(n-1) / 2^(2n) (order of the advantage bound, constant omitted)");
    return row;
}

// ---- selftest --------------------------------------------------------------------

namespace {

double measured(const ResultRow &r, const std::string &k) {
    return r.measured.at(k).get<double>();
}
double bound_of(const ResultRow &r, const std::string &k) {
    return r.bounds.at(k).at("value").get<double>();
}

}  // namespace

std::vector<SelftestCase> selftest_cases(int threads) {
    std::vector<SelftestCase> cases;
    auto add = [&](nlohmann::json j, std::string invariant, std::function<bool(const std::vector<ResultRow> &)> check) {
        auto c = ExperimentConfig::from_json(j);
        c.threads = threads;
        cases.push_back({std::move(c), std::move(invariant), std::move(check)});
    };
    auto all = [](const std::vector<ResultRow> &rows, auto pred) {
        return !rows.empty() && std::all_of(rows.begin(), rows.end(), pred);
    };
    add({{"experiment", "grover_sweep"}, {"n_bits", 4}, {"seed", 1}}, "exact success equals the closed form",
        [&](const std::vector<ResultRow> &rows) {
            return all(rows, [](const ResultRow &r) {
                return std::abs(measured(r, "success") - bound_of(r, "closed_form")) <= 1e-9;
            });
        });
    add({{"experiment", "search_amplification"}, {"seed", 2}, {"params", {{"ell_max", 4}}}},
        "verified probability and meters match 1-(1-eps)^l, (lS, l(T+1))", [&](const std::vector<ResultRow> &rows) {
            return all(rows, [](const ResultRow &r) {
                return std::abs(measured(r, "verified_probability") - bound_of(r, "verified")) <= 1e-9 &&
                       std::abs(measured(r, "success") - bound_of(r, "end_to_end")) <= 1e-9 &&
                       r.measured.at("resources_match").get<bool>();
            });
        });
    add({{"experiment", "restricted_amplification"}, {"seed", 3}, {"params", {{"r_samples", 16}}}},
        "restricted target reached", [&](const std::vector<ResultRow> &rows) {
            return measured(rows.at(0), "pair_fraction") >= bound_of(rows.at(0), "pair_fraction");
        });
    add({{"experiment", "decision_amplification"}, {"seed", 4}, {"params", {{"ell_max", 15}}}},
        "majority equals the binomial tail and clears the Chernoff form", [&](const std::vector<ResultRow> &rows) {
            for (size_t i = 0; i + 1 < rows.size(); i++) {
                const auto &r = rows[i];
                if (std::abs(measured(r, "success") - bound_of(r, "binomial_tail")) > 1e-9 ||
                    !r.measured.at("above_chernoff").get<bool>()) {
                    return false;
                }
            }
            return rows.size() > 1;
        });
    add({{"experiment", "search_to_decision"}, {"seed", 5}, {"trials", 200}, {"params", {{"dpi", "perfect"}, {"ell", 1}}}},
        "perfect decision inverter recovers every preimage", [&](const std::vector<ResultRow> &rows) {
            return measured(rows.at(0), "success") == 1.0 && rows.at(0).measured.at("resources_match").get<bool>();
        });
    add({{"experiment", "unique_search"}, {"seed", 6}, {"trials", 300}, {"params", {{"domain_bits", 3}}}},
        "NO error is 0 and f queries stay within 2T", [&](const std::vector<ResultRow> &rows) {
            const auto &r = rows.at(0);
            return measured(r, "no_error") == 0.0 && r.measured.at("f_budget_violations").get<uint64_t>() == 0;
        });
    add({{"experiment", "swapping_lemma"}, {"seed", 7}, {"params", {{"count", 40}}}},
        "every triple satisfies the 2 sqrt(T q) form", [&](const std::vector<ResultRow> &rows) {
            return rows.at(0).measured.at("hybrid_bound_violations").get<uint64_t>() == 0;
        });
    add({{"experiment", "qrac_roundtrip"}, {"seed", 8},
            {"params", {{"encode_seeds", 12}, {"queries_per_seed", 20}, {"epsilon_perm_samples", 2}}}},
        "lengths match the formula and decoding stays within the majority tail", [&](const std::vector<ResultRow> &rows) {
            const auto &r = rows.at(0);
            return r.measured.at("length_mismatches").get<uint64_t>() == 0 &&
                   measured(r, "failure_rate") <= bound_of(r, "majority_tail");
        });
    add({{"experiment", "qrac_roundtrip"}, {"seed", 9},
            {"params", {{"inverter", "full_table"}, {"encode_seeds", 6}, {"queries_per_seed", 16}, {"rho", 2},
                           {"epsilon_perm_samples", 1}, {"inclusion_probability", 1.0}}}},
        "full-table code decodes exactly", [&](const std::vector<ResultRow> &rows) {
            const auto &r = rows.at(0);
            return r.measured.at("length_mismatches").get<uint64_t>() == 0 && measured(r, "failure_rate") == 0.0;
        });
    for (const char *adv : {"random_guess", "ciphertext_probe"}) {
        add({{"experiment", "ow_qccra2_rp"}, {"seed", 10}, {"trials", 2000}, {"params", {{"adversary", adv}}}},
            std::string(adv) + " scores 1/2 within 4 sigma", [&](const std::vector<ResultRow> &rows) {
                const auto &r = rows.at(0);
                return std::abs(measured(r, "z_vs_half")) <= 4 && r.measured.at("puncture_failures").get<uint64_t>() == 0;
            });
    }
    add({{"experiment", "ow_qccra2_rp"}, {"seed", 11}, {"trials", 500}, {"params", {{"adversary", "full_key"}}}},
        "the key holder always wins", [&](const std::vector<ResultRow> &rows) {
            return measured(rows.at(0), "success") == 1.0;
        });
    add({{"experiment", "tail_bounds"}, {"seed", 12}, {"params", {{"tables", 300}}}}, "every bound holds",
        [&](const std::vector<ResultRow> &rows) {
            return all(rows, [](const ResultRow &r) {
                return r.measured.at("holds").get<bool>();
            });
        });
    add({{"experiment", "decision_baseline"}, {"seed", 13}}, "baselines hit their exact success",
        [&](const std::vector<ResultRow> &rows) {
            return all(rows, [](const ResultRow &r) {
                return std::abs(measured(r, "success") - bound_of(r, "success")) <= 1e-12;
            });
        });
    return cases;
}

}  // namespace perminv
