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
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "perminv/permutation.h"
#include "perminv/statevector.h"

namespace perminv {

enum class Direction { forward, inverse };

/// How derived oracles are realized. `functional` applies the composed
/// function table in one relabeling; `circuit` replays the reversible
/// aux-register construction (compute, copy out, uncompute) on every basis
/// label and checks that the aux registers return to zero.
enum class OracleMode { functional, circuit };

/// Inverse-oracle inputs and outputs live on n+1 bits: (value << 1) | flag.
constexpr uint64_t inverse_encoding(uint64_t value, uint64_t flag) {
    return (value << 1) | (flag & 1);
}
/// The reject element 1^n || 1.
constexpr uint64_t reject_element(int n_bits) {
    return inverse_encoding((1ULL << n_bits) - 1, 1);
}

/// pi^{-1}_{⊥y}: (w, 0) -> (pi^{-1}(w), 0) for w != y, everything else -> reject.
uint64_t punctured_inverse_value(const Permutation &perm, uint64_t y, uint64_t wb);

struct MagnitudeProbe {
    Direction direction;
    /// Indicator over the query register's values (n bits forward, n+1 inverse).
    std::vector<bool> subset;
    double mass = 0;
};

/// An instrumented two-sided oracle: forward O_f on (w, z) registers of n bits
/// and the punctured inverse on (w||b, z||b') registers of n+1 bits.
///
/// Every direct query is checked against the budget, accrues the registered
/// magnitude probes on the pre-query state, and is then applied as a basis
/// relabeling. Handles built on top of another handle relay their queries
/// through `charge_relayed`, which meters one logical query on the base plus
/// the number of base oracle applications the construction needs.
class OracleHandle {
   public:
    explicit OracleHandle(int n_bits);
    virtual ~OracleHandle() = default;

    int n_bits() const {
        return n_bits_;
    }
    uint64_t domain_size() const {
        return 1ULL << n_bits_;
    }

    void forward_query(StateVector &state, const RegisterLayout &layout, std::string_view w_reg, std::string_view z_reg);
    void inverse_query(
        StateVector &state, const RegisterLayout &layout, std::string_view wb_reg, std::string_view zb_reg);

    /// The classical function each direction realizes.
    virtual uint64_t forward_value(uint64_t w) const = 0;
    virtual uint64_t inverse_value(uint64_t wb) const = 0;

    /// Image of one basis label under a single application. Qubits at and above
    /// `free_offset` are unused by the caller and start (and must end) at zero;
    /// circuit constructions place their aux registers there.
    virtual uint64_t forward_label(uint64_t index, const Register &w, const Register &z, int free_offset) const;
    virtual uint64_t inverse_label(uint64_t index, const Register &wb, const Register &zb, int free_offset) const;

    uint64_t query_count() const {
        return query_count_;
    }
    /// Oracle applications performed against this handle's own tables,
    /// counting both direct queries and relayed compute/uncompute calls.
    uint64_t oracle_calls() const {
        return oracle_calls_;
    }
    std::optional<uint64_t> budget() const {
        return budget_;
    }
    void set_budget(uint64_t budget) {
        budget_ = budget;
    }

    /// Probes must be registered before the first query.
    size_t add_probe(Direction direction, std::vector<bool> subset);
    const std::vector<MagnitudeProbe> &probes() const {
        return probes_;
    }

    /// Meters one logical query relayed from a derived handle that consumes
    /// `calls` applications of this oracle, and relays it further down.
    void charge_relayed(Direction direction, uint64_t calls);

   protected:
    /// Accounting for `calls` applications made within one logical query;
    /// derived handles forward the charge to the oracles they are built on.
    virtual void on_query(Direction direction, uint64_t calls) {
        (void)direction;
        (void)calls;
    }

   private:
    void charge_logical();
    void accrue(Direction direction, const StateVector &state, const Register &input);

    int n_bits_;
    uint64_t query_count_ = 0;
    uint64_t oracle_calls_ = 0;
    std::optional<uint64_t> budget_;
    std::vector<MagnitudeProbe> probes_;
};

/// q(A, S): accumulated probe mass. Throws ContractViolation on unknown ids.
double total_query_magnitude(const OracleHandle &handle, size_t probe_id);

/// O_pi together with O_{pi^{-1}_{⊥y}}.
class TwoSidedOracle : public OracleHandle {
   public:
    TwoSidedOracle(std::shared_ptr<const Permutation> perm, uint64_t y);

    uint64_t forward_value(uint64_t w) const override {
        return (*forward_)(w);
    }
    uint64_t inverse_value(uint64_t wb) const override {
        return (*inverse_)(wb);
    }
    const ClassicalFunctionTable &forward_table() const {
        return *forward_;
    }
    const ClassicalFunctionTable &inverse_table() const {
        return *inverse_;
    }
    const Permutation &permutation() const {
        return *perm_;
    }
    uint64_t punctured_image() const {
        return y_;
    }

   private:
    std::shared_ptr<const Permutation> perm_;
    uint64_t y_;
    std::shared_ptr<const ClassicalFunctionTable> forward_;
    std::shared_ptr<const ClassicalFunctionTable> inverse_;
};

TwoSidedOracle make_two_sided(const Permutation &perm, uint64_t y);
TwoSidedOracle make_two_sided(std::shared_ptr<const Permutation> perm, uint64_t y);

/// A forward oracle for an arbitrary n -> n function table. The inverse
/// direction answers with the reject element everywhere unless a table is given.
class TableOracle : public OracleHandle {
   public:
    explicit TableOracle(ClassicalFunctionTable forward, std::optional<ClassicalFunctionTable> inverse = std::nullopt);

    uint64_t forward_value(uint64_t w) const override {
        return forward_(w);
    }
    uint64_t inverse_value(uint64_t wb) const override {
        return inverse_ ? (*inverse_)(wb) : reject_element(n_bits());
    }

   private:
    ClassicalFunctionTable forward_;
    std::optional<ClassicalFunctionTable> inverse_;
};

/// (σ1 ∘ π ∘ σ2) with its inverse punctured at σ1(y), built from a base handle
/// for π punctured at y. Each logical query costs two base applications.
class ConjugatedOracle : public OracleHandle {
   public:
    ConjugatedOracle(
        std::shared_ptr<const Permutation> sigma1,
        std::shared_ptr<const Permutation> sigma2,
        OracleHandle &base,
        uint64_t y,
        OracleMode mode);

    uint64_t forward_value(uint64_t w) const override {
        return forward_(w);
    }
    uint64_t inverse_value(uint64_t wb) const override {
        return inverse_(wb);
    }
    uint64_t forward_label(uint64_t index, const Register &w, const Register &z, int free_offset) const override;
    uint64_t inverse_label(uint64_t index, const Register &wb, const Register &zb, int free_offset) const override;

    uint64_t punctured_image() const {
        return (*sigma1_)(y_);
    }
    /// Base applications consumed so far (2 per logical query).
    uint64_t base_calls_consumed() const {
        return 2 * query_count();
    }
    OracleMode mode() const {
        return mode_;
    }

   protected:
    void on_query(Direction direction, uint64_t calls) override;

   private:
    std::shared_ptr<const Permutation> sigma1_;
    std::shared_ptr<const Permutation> sigma2_;
    OracleHandle *base_;
    uint64_t y_;
    OracleMode mode_;
    ClassicalFunctionTable forward_;
    ClassicalFunctionTable inverse_;
    // Circuit-path gate tables.
    ClassicalFunctionTable sigma1_gate_;
    ClassicalFunctionTable sigma2_gate_;
    ClassicalFunctionTable sigma1_inv_star_;
    ClassicalFunctionTable sigma2_inv_star_;
};

/// σ* lifted to the inverse domain: (w, 0) -> (σ^{-1}(w), 0); flagged inputs,
/// including the reject element, are left unchanged.
ClassicalFunctionTable starred_inverse(const Permutation &sigma);

ConjugatedOracle compose_conjugated(
    std::shared_ptr<const Permutation> sigma1,
    std::shared_ptr<const Permutation> sigma2,
    OracleHandle &base,
    uint64_t y,
    OracleMode mode = OracleMode::functional);

/// Oracles for π ∘ swap_{0,j}: forward is (swap ⊗ I) O_π (swap ⊗ I); inverse
/// conjugates the output register, (I ⊗ swap) O_{π^{-1}_{⊥y}} (I ⊗ swap).
///
/// Bit positions count from the first (most significant) bit of the n-bit
/// string: position p is physical bit n-1-p of the value.
class SwapConjugatedOracle : public OracleHandle {
   public:
    SwapConjugatedOracle(OracleHandle &base, int position);

    uint64_t forward_value(uint64_t w) const override;
    uint64_t inverse_value(uint64_t wb) const override;
    uint64_t forward_label(uint64_t index, const Register &w, const Register &z, int free_offset) const override;
    uint64_t inverse_label(uint64_t index, const Register &wb, const Register &zb, int free_offset) const override;

    int position() const {
        return position_;
    }

   protected:
    void on_query(Direction direction, uint64_t calls) override;

   private:
    uint64_t swap_value(uint64_t v) const;

    OracleHandle *base_;
    int position_;
};

/// Exchanges string positions 0 and `position` of an n-bit value.
uint64_t swap_positions(uint64_t value, int n_bits, int position);

/// A classical Boolean function behind a counting quantum oracle.
struct FunctionOracle {
    ClassicalFunctionTable table;
    uint64_t calls = 0;
};

/// The embedding of a UNIQUESEARCH instance f into a near-permutation h.
struct UniqueSearchEmbedding {
    std::shared_ptr<const Permutation> perm;
    uint64_t target = 0;      // t = π(s || μ)
    uint64_t suffix = 0;      // μ
    int suffix_bits = 0;      // m
    uint64_t case_bit = 0;    // first bit of π^{-1}(t)

    int n_bits() const {
        return perm->n_bits();
    }
    /// h_{f,π,t,μ}(x): t when x = (1 - case_bit) || j || μ with f(j) = 1, π(x) otherwise.
    uint64_t h(const ClassicalFunctionTable &f, uint64_t x) const;
};

/// O_h and O_{h^{-1*}} = O_{π^{-1}_{⊥t}} over a counting f-oracle. Each
/// forward query costs exactly two f-oracle calls (compute and uncompute);
/// inverse queries do not touch f.
class UniqueSearchOracle : public OracleHandle {
   public:
    UniqueSearchOracle(UniqueSearchEmbedding emb, FunctionOracle &f, OracleMode mode);

    uint64_t forward_value(uint64_t x) const override {
        return emb_.h(f_->table, x);
    }
    uint64_t inverse_value(uint64_t wb) const override {
        return punctured_inverse_value(*emb_.perm, emb_.target, wb);
    }
    uint64_t forward_label(uint64_t index, const Register &w, const Register &z, int free_offset) const override;

    const UniqueSearchEmbedding &embedding() const {
        return emb_;
    }

   protected:
    void on_query(Direction direction, uint64_t calls) override;

   private:
    UniqueSearchEmbedding emb_;
    FunctionOracle *f_;
    OracleMode mode_;
    ClassicalFunctionTable perm_gate_;
};

UniqueSearchOracle build_unique_search_oracles(
    const UniqueSearchEmbedding &emb, FunctionOracle &f, OracleMode mode = OracleMode::functional);

/// What a QRAC decoder knows: π outside G, the set G, and the challenge y.
struct QracDecodeOracle {
    static constexpr uint64_t kUnknown = ~0ULL;

    int n_bits = 0;
    std::vector<uint64_t> known_part;   // π(w) for w ∉ G, kUnknown on G
    std::vector<bool> good_set;         // indicator of G
    uint64_t target_image = 0;          // y
};

/// π̄ = y on G and π elsewhere; inverse punctured on all of π(G).
class QracDecodeHandle : public OracleHandle {
   public:
    QracDecodeHandle(QracDecodeOracle d, OracleMode mode);

    uint64_t forward_value(uint64_t w) const override;
    uint64_t inverse_value(uint64_t wb) const override;
    uint64_t forward_label(uint64_t index, const Register &w, const Register &z, int free_offset) const override;
    uint64_t inverse_label(uint64_t index, const Register &wb, const Register &zb, int free_offset) const override;

   private:
    QracDecodeOracle d_;
    OracleMode mode_;
    std::vector<uint64_t> known_inverse_;   // π^{-1}(w) for w ∉ π(G), kUnknown otherwise
    ClassicalFunctionTable in_good_;        // [w ∈ G]
    ClassicalFunctionTable known_gate_;     // π' with 0 on G
    ClassicalFunctionTable punctured_;      // [w ∈ π(G) or flag]
    ClassicalFunctionTable known_inv_gate_; // π'^{-1} || 0, 0 where undefined
};

QracDecodeHandle build_qrac_decode_oracle(const QracDecodeOracle &d, OracleMode mode = OracleMode::functional);

}  // namespace perminv
