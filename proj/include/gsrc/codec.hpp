// Coefficient assignment, encoding, reconstruction from any k nodes, and MDS
// verification over a constructed parity pattern.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "gsrc/galois.hpp"
#include "gsrc/layout.hpp"

namespace gsrc {

// Nodes are numbered 1..n: 1..k systematic, k+1..n parity (parity array l
// lives on node k+l).
inline unsigned parity_node(unsigned k, unsigned l) { return k + l; }

// Nonzero coefficients aligned with the occupied cells of each index-array
// row, scanned in column order.
struct CoefficientTable {
    std::vector<std::vector<std::vector<FieldElem>>> rows;  // [array l-1][row i-1]

    bool operator==(const CoefficientTable&) const = default;
};

struct VerifyLevel {
    enum class Kind { Auto, Exhaustive, Sampled };
    Kind kind = Kind::Auto;
    unsigned samples = 200;

    static VerifyLevel exhaustive() { return {Kind::Exhaustive, 0}; }
    static VerifyLevel sampled(unsigned n) { return {Kind::Sampled, n}; }

    // Exhaustive while C(n,k) * (r*alpha)^3 stays within ~1e10 estimated
    // field operations, sampled(200) beyond that.
    VerifyLevel resolve(const CodeParams& params) const;
};

struct MdsReport {
    bool exhaustive = false;
    std::uint64_t subsets_checked = 0;
    std::vector<std::vector<unsigned>> failures;  // offending k-subsets

    bool pass() const { return failures.empty(); }
};

// A k x alpha message stripe, node-major: node j's symbols are contiguous.
struct Stripe {
    unsigned k = 0;
    unsigned alpha = 0;
    std::vector<FieldElem> symbols;

    Stripe() = default;
    Stripe(unsigned k_, unsigned alpha_)
        : k(k_), alpha(alpha_), symbols(std::size_t(k_) * alpha_, 0) {}

    FieldElem& at(unsigned i, unsigned j) { return symbols[std::size_t(j - 1) * alpha + i - 1]; }
    FieldElem at(unsigned i, unsigned j) const {
        return symbols[std::size_t(j - 1) * alpha + i - 1];
    }

    bool operator==(const Stripe&) const = default;
};

// Systematic part plus the r parity columns p_{i,l}.
struct CodedStripe {
    Stripe systematic;
    unsigned r = 0;
    std::vector<FieldElem> parity;  // node-major: parity node l's alpha symbols contiguous

    FieldElem& p(unsigned i, unsigned l) {
        return parity[std::size_t(l - 1) * systematic.alpha + i - 1];
    }
    FieldElem p(unsigned i, unsigned l) const {
        return parity[std::size_t(l - 1) * systematic.alpha + i - 1];
    }

    // Symbols held by node (systematic or parity).
    std::vector<FieldElem> node_symbols(unsigned node) const;

    bool operator==(const CodedStripe&) const = default;
};

struct NodeData {
    unsigned node = 0;
    std::vector<FieldElem> symbols;
};

// The complete code instance.
struct GeneralizedCode {
    CodeParams params;
    NodeGroups groups;
    std::vector<Partitioning> partitions;
    ParityPattern pattern;
    CoefficientTable coeffs;
    std::shared_ptr<const Field> field;
    MdsReport verification;
};

// Draws nonzero coefficients uniformly (seeded, deterministic) and redraws
// until verify_mds passes at the requested level, up to 64 attempts. Throws
// MdsSearchExhausted when the budget runs out (field too small). The final
// full report lands in *report when given.
CoefficientTable assign_coefficients(const ParityPattern& pattern, const Field& field,
                                     std::uint64_t seed, VerifyLevel level,
                                     MdsReport* report = nullptr);

// Eq.-style parity generation: each parity symbol combines the occupied
// cells of its index-array row.
CodedStripe encode(const GeneralizedCode& code, const Stripe& s);

// Recovers the message from exactly k distinct node shards (throws
// WrongNodeCount otherwise; SingularSystem is unreachable for a verified
// code).
Stripe reconstruct(const GeneralizedCode& code, const std::vector<NodeData>& available);

// Many stripes against one factorization-worth of work; stripes[x][idx] is
// the idx-th stripe's symbols for nodes[x].
std::vector<Stripe> reconstruct_stripes(const GeneralizedCode& code,
                                        const std::vector<unsigned>& nodes,
                                        const std::vector<std::vector<std::vector<FieldElem>>>& data);

// Checks solvability for every k-subset (exhaustive) or for `samples` random
// subsets plus every subset containing all r parity nodes (sampled). The
// sampling RNG is seeded with `seed` so reruns check identical subsets.
MdsReport verify_mds(const ParityPattern& pattern, const CoefficientTable& coeffs,
                     const Field& field, VerifyLevel level, std::uint64_t seed,
                     bool stop_at_first_failure = false);

// C(n,k) * r * alpha, saturating: the sufficient field-size bound for the
// existence of MDS coefficients.
std::uint64_t mds_field_bound(const CodeParams& params);

// Layout + coefficients + verification in one step.
GeneralizedCode construct_code(const CodeParams& params,
                               std::optional<unsigned> poly = std::nullopt,
                               VerifyLevel level = {});

}  // namespace gsrc
