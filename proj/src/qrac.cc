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

#include "perminv/qrac.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "perminv/errors.h"
#include "perminv/oracle.h"
#include "perminv/parallel.h"

namespace perminv {

namespace {

constexpr double kTwoThirds = 2.0 / 3.0 - 1e-12;
constexpr double kSlack = 1e-12;

void push_big(std::vector<bool> &bits, const BigInt &value, uint64_t width) {
    for (uint64_t b = width; b-- > 0;) {
        bits.push_back(boost::multiprecision::bit_test(value, static_cast<unsigned>(b)));
    }
}

void push_u64(std::vector<bool> &bits, uint64_t value, int width) {
    for (int b = width - 1; b >= 0; b--) {
        bits.push_back(((value >> b) & 1) != 0);
    }
}

class BitReader {
   public:
    explicit BitReader(const std::vector<bool> &bits) : bits_(bits) {
    }
    BigInt big(uint64_t width) {
        need(width);
        BigInt v = 0;
        for (uint64_t i = 0; i < width; i++) {
            v <<= 1;
            if (bits_[pos_++]) {
                v |= 1;
            }
        }
        return v;
    }
    uint64_t u64(int width) {
        need(static_cast<uint64_t>(width));
        uint64_t v = 0;
        for (int i = 0; i < width; i++) {
            v = (v << 1) | (bits_[pos_++] ? 1 : 0);
        }
        return v;
    }
    bool done() const {
        return pos_ == bits_.size();
    }

   private:
    void need(uint64_t width) const {
        if (pos_ + width > bits_.size()) {
            throw DecodeError("encoding is truncated");
        }
    }
    const std::vector<bool> &bits_;
    size_t pos_ = 0;
};

std::vector<bool> indicator(uint64_t size, const std::vector<uint64_t> &elements) {
    std::vector<bool> out(size, false);
    for (uint64_t e : elements) {
        if (e >= size) {
            throw ContractViolation("set element out of range");
        }
        out[e] = true;
    }
    return out;
}

}  // namespace

// ---- combinatorics -------------------------------------------------------------

uint64_t bits_for_count(const BigInt &count) {
    if (count <= 1) {
        return 0;
    }
    return boost::multiprecision::msb(BigInt(count - 1)) + 1;
}

BigInt arrangement_count(uint64_t universe, uint64_t length) {
    if (length > universe) {
        throw ContractViolation("arrangement longer than its universe");
    }
    BigInt out = 1;
    for (uint64_t i = 0; i < length; i++) {
        out *= universe - i;
    }
    return out;
}

BigInt rank_arrangement(const std::vector<uint64_t> &values, uint64_t universe) {
    if (values.size() > universe) {
        throw ContractViolation("arrangement longer than its universe");
    }
    std::vector<bool> used(universe, false);
    BigInt rank = 0;
    for (uint64_t i = 0; i < values.size(); i++) {
        uint64_t v = values[i];
        if (v >= universe || used[v]) {
            throw ContractViolation("arrangement values must be distinct and in range");
        }
        uint64_t digit = 0;
        for (uint64_t u = 0; u < v; u++) {
            digit += used[u] ? 0 : 1;
        }
        used[v] = true;
        rank = rank * (universe - i) + digit;
    }
    return rank;
}

std::vector<uint64_t> unrank_arrangement(const BigInt &rank, uint64_t universe, uint64_t length) {
    if (rank < 0 || rank >= arrangement_count(universe, length)) {
        throw DecodeError("arrangement rank out of range");
    }
    std::vector<uint64_t> digits(length);
    BigInt rest = rank;
    for (uint64_t i = length; i-- > 0;) {
        uint64_t radix = universe - i;
        digits[i] = static_cast<uint64_t>(rest % radix);
        rest /= radix;
    }
    std::vector<bool> used(universe, false);
    std::vector<uint64_t> out(length);
    for (uint64_t i = 0; i < length; i++) {
        uint64_t skip = digits[i];
        for (uint64_t u = 0; u < universe; u++) {
            if (used[u]) {
                continue;
            }
            if (skip == 0) {
                out[i] = u;
                used[u] = true;
                break;
            }
            skip--;
        }
    }
    return out;
}

BigInt binomial(uint64_t n, uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    BigInt out = 1;
    for (uint64_t i = 1; i <= k; i++) {
        out = out * (n - k + i) / i;
    }
    return out;
}

BigInt rank_combination(const std::vector<uint64_t> &sorted_indices) {
    BigInt rank = 0;
    for (uint64_t i = 0; i < sorted_indices.size(); i++) {
        if (i > 0 && sorted_indices[i] <= sorted_indices[i - 1]) {
            throw ContractViolation("combination indices must be strictly increasing");
        }
        rank += binomial(sorted_indices[i], i + 1);
    }
    return rank;
}

std::vector<uint64_t> unrank_combination(const BigInt &rank, uint64_t k) {
    std::vector<uint64_t> out(k);
    BigInt rest = rank;
    for (uint64_t i = k; i-- > 0;) {
        // Largest c with C(c, i+1) <= rest.
        uint64_t c = i;
        while (binomial(c + 1, i + 1) <= rest) {
            c++;
        }
        out[i] = c;
        rest -= binomial(c, i + 1);
    }
    return out;
}

// ---- parameters ----------------------------------------------------------------

void QracParams::validate() const {
    if (!(gamma > 0 && gamma < 1) || !(c > 0 && c < 1)) {
        throw ContractViolation("gamma and c must lie in (0, 1)");
    }
    if (rho_copies < 1) {
        throw ContractViolation("rho_copies must be at least 1");
    }
    if (!(epsilon >= 0 && epsilon <= 1)) {
        throw ContractViolation("epsilon must lie in [0, 1]");
    }
    if (r_samples < 1) {
        throw ContractViolation("r_samples must be at least 1");
    }
    inverter.validate();
    if (inverter.kind != InverterKind::search || inverter.adaptive_bits != 0) {
        throw ContractViolation("the permutation code needs a non-adaptive search inverter");
    }
    if (inclusion_probability && !(*inclusion_probability > 0 && *inclusion_probability <= 1)) {
        throw ContractViolation("inclusion probability must lie in (0, 1]");
    }
    subset_probability();
}

uint64_t QracParams::effective_T() const {
    return std::max<uint64_t>(inverter.query_budget, 1);
}

double QracParams::subset_probability() const {
    if (inclusion_probability) {
        return *inclusion_probability;
    }
    double t = static_cast<double>(effective_T());
    double p = gamma / (t * t);
    if (p > 1) {
        throw ContractViolation("gamma / T^2 exceeds 1");
    }
    return p;
}

double QracParams::case2_threshold() const {
    double t = static_cast<double>(effective_T());
    double n = static_cast<double>(1ULL << inverter.n_bits);
    return epsilon * gamma * n / (4 * t * t) * (1 - 5 * gamma * gamma / c);
}

uint64_t default_rho(int n_bits, double constant) {
    double v = constant * std::log(static_cast<double>(1ULL << n_bits));
    return std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(v * (1 - kSlack))));
}

// ---- sets ----------------------------------------------------------------------

std::vector<uint64_t> sample_subset_with_probability(int n_bits, double probability, const Coins &coins) {
    if (!(probability >= 0) || probability > 1) {
        throw ContractViolation("subset inclusion probability must lie in [0, 1]");
    }
    Rng rng = coins.rng();
    std::vector<uint64_t> out;
    for (uint64_t x = 0; x < (1ULL << n_bits); x++) {
        // One draw per element keeps the stream aligned for every probability.
        if (rng.uniform01() < probability) {
            out.push_back(x);
        }
    }
    return out;
}

std::vector<uint64_t> sample_subset_R(int n_bits, uint64_t T, double gamma, const Coins &coins) {
    if (!(gamma > 0 && gamma < 1)) {
        throw ContractViolation("gamma must lie in (0, 1)");
    }
    if (T == 0) {
        throw ContractViolation("gamma / T^2 is unbounded for T = 0");
    }
    double t = static_cast<double>(T);
    double p = gamma / (t * t);
    if (p > 1) {
        throw ContractViolation("gamma / T^2 exceeds 1");
    }
    return sample_subset_with_probability(n_bits, p, coins);
}

MagnitudeSets magnitude_sets(const Permutation &perm, const std::vector<uint64_t> &subset, uint64_t x) {
    uint64_t n = perm.size();
    MagnitudeSets sets;
    sets.sigma0.assign(n, false);
    sets.sigma1.assign(2 * n, false);
    for (uint64_t w : subset) {
        if (w >= n) {
            throw ContractViolation("subset element out of range");
        }
        if (w == x) {
            continue;
        }
        sets.sigma0[w] = true;
        uint64_t v = perm(w);
        sets.sigma1[inverse_encoding(v, 0)] = true;
        sets.sigma1[inverse_encoding(v, 1)] = true;
    }
    return sets;
}

double good_set_magnitude(
    const Permutation &perm, const InverterSpec &inv, const std::vector<uint64_t> &subset, uint64_t x, const Coins &r) {
    MagnitudeSets sets = magnitude_sets(perm, subset, x);
    Preparation prep = inv.prepare(perm, r);
    auto oracle = make_two_sided(perm, perm(x));
    oracle.set_budget(inv.query_budget);
    size_t p0 = oracle.add_probe(Direction::forward, sets.sigma0);
    size_t p1 = oracle.add_probe(Direction::inverse, sets.sigma1);
    inv.invert(oracle, prep.advice, prep.mu, perm(x), r);
    return total_query_magnitude(oracle, p0) + total_query_magnitude(oracle, p1);
}

GoodSet good_set_G(const Permutation &perm, const InverterSpec &inv, const std::vector<uint64_t> &subset, double c,
    const Coins &r, uint64_t r_samples, uint64_t success_seed, int threads) {
    if (!(c > 0 && c < 1)) {
        throw ContractViolation("c must lie in (0, 1)");
    }
    GoodSet gs;
    gs.success = per_preimage_success(inv, perm, r_samples, success_seed, threads);
    for (uint64_t x = 0; x < gs.success.size(); x++) {
        if (gs.success[x] >= kTwoThirds) {
            gs.inverted.push_back(x);
        }
    }
    std::set_intersection(subset.begin(), subset.end(), gs.inverted.begin(), gs.inverted.end(),
        std::back_inserter(gs.candidates));
    gs.magnitude.assign(gs.candidates.size(), 0.0);
    parallel_for(gs.candidates.size(), threads, [&](uint64_t i) {
        gs.magnitude[i] = good_set_magnitude(perm, inv, subset, gs.candidates[i], r);
    });
    double limit = c / static_cast<double>(std::max<uint64_t>(inv.query_budget, 1));
    for (uint64_t i = 0; i < gs.candidates.size(); i++) {
        if (gs.magnitude[i] <= limit + kSlack) {
            gs.good.push_back(gs.candidates[i]);
        }
    }
    return gs;
}

double measure_inverted_fraction(
    const InverterSpec &inv, uint64_t perm_samples, uint64_t r_samples, uint64_t seed, int threads) {
    if (perm_samples == 0) {
        throw ContractViolation("need at least one permutation sample");
    }
    Coins root{seed};
    uint64_t hits = 0, total = 0;
    for (uint64_t k = 0; k < perm_samples; k++) {
        auto perm = Permutation::random(inv.n_bits, root.sub(0).sub(k).seed);
        auto success = per_preimage_success(inv, perm, r_samples, root.sub(1).sub(k).seed, threads);
        for (double s : success) {
            hits += s >= kTwoThirds ? 1 : 0;
            total++;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

// ---- encoding ------------------------------------------------------------------

namespace {

std::vector<uint64_t> draw_subset(const QracParams &params, const Coins &coins) {
    int n_bits = params.inverter.n_bits;
    if (params.inclusion_probability) {
        return sample_subset_with_probability(n_bits, *params.inclusion_probability, coins);
    }
    return sample_subset_R(n_bits, params.effective_T(), params.gamma, coins);
}

}  // namespace

uint64_t qrac_length_formula(
    int case_flag, int n_bits, uint64_t subset_size, uint64_t good_size, uint64_t rho, uint64_t advice_qubits) {
    uint64_t n = 1ULL << n_bits;
    if (case_flag == 1) {
        return 1 + bits_for_count(arrangement_count(n, n));
    }
    if (case_flag != 2 || good_size < 1 || good_size > subset_size || subset_size > n) {
        throw ContractViolation("invalid case-2 sizes");
    }
    return 1 + static_cast<uint64_t>(n_bits) + bits_for_count(binomial(subset_size, good_size)) +
           bits_for_count(arrangement_count(n, n - good_size)) + rho * advice_qubits;
}

uint64_t payload_length_bits(const QracEncoding &enc) {
    uint64_t total = enc.classical.size();
    for (const auto &a : enc.advice_copies) {
        total += a.total_qubits();
    }
    return total;
}

QracEncoding encode(const Permutation &perm, const QracParams &params, const Coins &R) {
    params.validate();
    const InverterSpec &inv = params.inverter;
    int n_bits = inv.n_bits;
    if (perm.n_bits() != n_bits) {
        throw ContractViolation("permutation and inverter disagree on n_bits");
    }
    uint64_t n = perm.size();
    Coins r = R.sub(0);
    auto subset = draw_subset(params, R.sub(1));
    GoodSet gs = good_set_G(perm, inv, subset, params.c, r, params.r_samples, R.sub(2).seed, params.threads);

    QracEncoding enc;
    enc.n_bits = n_bits;
    enc.subset_size = subset.size();
    enc.inverted_size = gs.inverted.size();
    enc.good_size = gs.good.size();
    enc.good_set = gs.good;
    enc.threshold = params.case2_threshold();
    enc.in_X = static_cast<double>(gs.inverted.size()) >= params.epsilon * static_cast<double>(n) / 2 - kSlack;
    bool case2 = enc.in_X && !gs.good.empty() && static_cast<double>(gs.good.size()) >= enc.threshold - kSlack;

    if (!case2) {
        enc.case_flag = 1;
        enc.classical.push_back(false);
        std::vector<uint64_t> inv_table(perm.inverse_table().begin(), perm.inverse_table().end());
        push_big(enc.classical, rank_arrangement(inv_table, n), bits_for_count(arrangement_count(n, n)));
        enc.length_bits = qrac_length_formula(1, n_bits, 0, 0, 0, 0);
        return enc;
    }

    enc.case_flag = 2;
    uint64_t g = gs.good.size();
    enc.classical.push_back(true);
    push_u64(enc.classical, g - 1, n_bits);
    std::vector<uint64_t> positions;
    for (uint64_t w : gs.good) {
        positions.push_back(static_cast<uint64_t>(std::lower_bound(subset.begin(), subset.end(), w) - subset.begin()));
    }
    push_big(enc.classical, rank_combination(positions), bits_for_count(binomial(subset.size(), g)));
    auto good = indicator(n, gs.good);
    std::vector<uint64_t> outside;
    for (uint64_t w = 0; w < n; w++) {
        if (!good[w]) {
            outside.push_back(perm(w));
        }
    }
    push_big(enc.classical, rank_arrangement(outside, n), bits_for_count(arrangement_count(n, n - g)));
    for (uint64_t i = 0; i < params.rho_copies; i++) {
        enc.advice_copies.push_back(inv.prepare(perm, r).advice);
    }
    enc.length_bits = qrac_length_formula(2, n_bits, subset.size(), g, params.rho_copies, inv.advice_qubits);
    return enc;
}

QracDecodeOracle decode_oracle_for(const Permutation &perm, const std::vector<uint64_t> &good, uint64_t y) {
    QracDecodeOracle d;
    d.n_bits = perm.n_bits();
    d.good_set = indicator(perm.size(), good);
    d.known_part.assign(perm.size(), QracDecodeOracle::kUnknown);
    for (uint64_t w = 0; w < perm.size(); w++) {
        if (!d.good_set[w]) {
            d.known_part[w] = perm(w);
        }
    }
    d.target_image = y;
    return d;
}

uint64_t decode(const QracEncoding &enc, uint64_t y, const QracParams &params, const Coins &R, uint64_t nonce) {
    params.validate();
    const InverterSpec &inv = params.inverter;
    int n_bits = inv.n_bits;
    uint64_t n = 1ULL << n_bits;
    if (enc.n_bits != n_bits) {
        throw DecodeError("encoding width does not match the inverter");
    }
    if (y >= n) {
        throw ContractViolation("decode query out of range");
    }
    BitReader in(enc.classical);
    bool flag = in.u64(1) != 0;
    if (flag != (enc.case_flag == 2)) {
        throw DecodeError("case flag disagrees with the payload");
    }
    if (!flag) {
        auto table = unrank_arrangement(in.big(bits_for_count(arrangement_count(n, n))), n, n);
        if (!in.done() || !enc.advice_copies.empty()) {
            throw DecodeError("case-1 encoding has trailing data");
        }
        return table[y];
    }

    auto subset = draw_subset(params, R.sub(1));
    uint64_t g = in.u64(n_bits) + 1;
    if (g > subset.size()) {
        throw DecodeError("good set larger than the sampled subset");
    }
    BigInt subset_rank = in.big(bits_for_count(binomial(subset.size(), g)));
    if (subset_rank >= binomial(subset.size(), g)) {
        throw DecodeError("subset rank out of range");
    }
    std::vector<uint64_t> good;
    for (uint64_t pos : unrank_combination(subset_rank, g)) {
        good.push_back(subset[pos]);
    }
    auto outside = unrank_arrangement(in.big(bits_for_count(arrangement_count(n, n - g))), n, n - g);
    if (!in.done()) {
        throw DecodeError("case-2 encoding has trailing data");
    }
    if (enc.advice_copies.size() != params.rho_copies) {
        throw DecodeError("wrong number of advice copies");
    }

    QracDecodeOracle d;
    d.n_bits = n_bits;
    d.good_set = indicator(n, good);
    d.known_part.assign(n, QracDecodeOracle::kUnknown);
    d.target_image = y;
    uint64_t k = 0;
    for (uint64_t w = 0; w < n; w++) {
        if (d.good_set[w]) {
            continue;
        }
        d.known_part[w] = outside[k++];
        if (outside[k - 1] == y) {
            return w;
        }
    }

    Coins r = R.sub(0);
    Coins draws = R.sub(3).sub(nonce).sub(y);
    std::map<uint64_t, uint64_t> votes;
    for (uint64_t i = 0; i < enc.advice_copies.size(); i++) {
        auto oracle = build_qrac_decode_oracle(d);
        oracle.set_budget(inv.query_budget);
        auto out = inv.invert(oracle, enc.advice_copies[i], 0, y, r);
        Rng rng = draws.sub(i).rng();
        votes[sample_index(out.distribution, rng)]++;
    }
    uint64_t best = 0, best_votes = 0;
    for (const auto &[value, count] : votes) {
        if (count > best_votes) {
            best = value;
            best_votes = count;
        }
    }
    return best;
}

double linkage_distance(
    const Permutation &perm, const InverterSpec &inv, const std::vector<uint64_t> &good, uint64_t x, const Coins &r) {
    if (!std::binary_search(good.begin(), good.end(), x)) {
        throw ContractViolation("linkage check needs x in G");
    }
    uint64_t y = perm(x);
    Preparation prep = inv.prepare(perm, r);
    auto real = make_two_sided(perm, y);
    real.set_budget(inv.query_budget);
    auto a = inv.invert(real, prep.advice, prep.mu, y, r);
    auto bar = build_qrac_decode_oracle(decode_oracle_for(perm, good, y));
    bar.set_budget(inv.query_budget);
    auto b = inv.invert(bar, prep.advice, prep.mu, y, r);
    if (!a.final_state || !b.final_state) {
        throw ContractViolation("inverter '" + inv.name + "' does not report its final state");
    }
    return euclidean_distance(*a.final_state, *b.final_state);
}

// ---- framing -------------------------------------------------------------------

namespace {

constexpr uint8_t kMagic[4] = {'P', 'Q', 'R', 'C'};

void put_u32(std::vector<uint8_t> &out, uint64_t v) {
    if (v > 0xFFFFFFFFULL) {
        throw ContractViolation("field does not fit the frame");
    }
    for (int s = 24; s >= 0; s -= 8) {
        out.push_back(static_cast<uint8_t>(v >> s));
    }
}

void put_bits(std::vector<uint8_t> &out, const std::vector<bool> &bits) {
    for (size_t i = 0; i < bits.size(); i += 8) {
        uint8_t byte = 0;
        for (size_t j = 0; j < 8; j++) {
            byte = static_cast<uint8_t>(byte << 1);
            if (i + j < bits.size() && bits[i + j]) {
                byte |= 1;
            }
        }
        out.push_back(byte);
    }
}

class ByteReader {
   public:
    explicit ByteReader(const std::vector<uint8_t> &bytes) : bytes_(bytes) {
    }
    uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    uint64_t u32() {
        uint64_t v = 0;
        for (int i = 0; i < 4; i++) {
            v = (v << 8) | u8();
        }
        return v;
    }
    std::vector<bool> bits(uint64_t count) {
        uint64_t bytes = (count + 7) / 8;
        need(bytes);
        std::vector<bool> out(count);
        for (uint64_t i = 0; i < count; i++) {
            out[i] = ((bytes_[pos_ + i / 8] >> (7 - i % 8)) & 1) != 0;
        }
        for (uint64_t i = count; i < bytes * 8; i++) {
            if ((bytes_[pos_ + i / 8] >> (7 - i % 8)) & 1) {
                throw DecodeError("nonzero padding bits");
            }
        }
        pos_ += bytes;
        return out;
    }
    bool done() const {
        return pos_ == bytes_.size();
    }

   private:
    void need(uint64_t count) const {
        if (pos_ + count > bytes_.size()) {
            throw DecodeError("frame is truncated");
        }
    }
    const std::vector<uint8_t> &bytes_;
    size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> serialize_encoding(const QracEncoding &enc) {
    std::vector<uint8_t> out(std::begin(kMagic), std::end(kMagic));
    out.push_back(static_cast<uint8_t>(enc.n_bits));
    put_u32(out, enc.classical.size());
    put_u32(out, enc.advice_copies.size());
    put_bits(out, enc.classical);
    for (const auto &a : enc.advice_copies) {
        if (!a.is_classical() || !a.parts.empty()) {
            throw ContractViolation("advice is not a classical basis state and cannot be serialized");
        }
        if (a.bits.size() != static_cast<size_t>(a.qubits)) {
            throw ContractViolation("advice bit count disagrees with its qubit count");
        }
        put_u32(out, static_cast<uint64_t>(a.qubits));
        put_bits(out, a.bits);
    }
    return out;
}

QracEncoding deserialize_encoding(const std::vector<uint8_t> &bytes) {
    ByteReader in(bytes);
    for (uint8_t m : kMagic) {
        if (in.u8() != m) {
            throw DecodeError("bad frame magic");
        }
    }
    QracEncoding enc;
    enc.n_bits = in.u8();
    if (enc.n_bits < 1 || enc.n_bits > 10) {
        throw DecodeError("frame n_bits out of range");
    }
    uint64_t classical_bits = in.u32();
    uint64_t copies = in.u32();
    if (classical_bits == 0) {
        throw DecodeError("frame has no case flag");
    }
    enc.classical = in.bits(classical_bits);
    enc.case_flag = enc.classical[0] ? 2 : 1;
    for (uint64_t i = 0; i < copies; i++) {
        Advice a;
        uint64_t q = in.u32();
        a.qubits = static_cast<int>(q);
        a.bits = in.bits(q);
        enc.advice_copies.push_back(std::move(a));
    }
    if (!in.done()) {
        throw DecodeError("trailing bytes after the frame");
    }
    enc.length_bits = payload_length_bits(enc);
    return enc;
}

}  // namespace perminv
