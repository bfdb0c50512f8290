// Index-array construction: node grouping, valid partitionings, and the
// extra-column scheduling that makes single-node repair cheap.
#pragma once

#include <cstdint>
#include <vector>

#include "gsrc/errors.hpp"

namespace gsrc {

// Code parameters. d = n-1 implicitly; every surviving node participates in
// a repair.
struct CodeParams {
    unsigned n = 0;       // total nodes
    unsigned k = 0;       // systematic nodes
    unsigned alpha = 0;   // sub-packetization level
    unsigned w = 0;       // field width in bits
    std::uint64_t seed = 0;  // RNG seed for coefficient assignment

    unsigned r() const { return n - k; }
    unsigned portion() const { return (alpha + r() - 1) / r(); }  // ceil(alpha/r)
    unsigned group_count() const { return (k + r() - 1) / r(); }  // ceil(k/r)
    std::uint64_t message_symbols() const {
        return static_cast<std::uint64_t>(k) * alpha;
    }

    // r^ceil(k/r), saturating.
    std::uint64_t alpha_cap() const;

    // Throws UsageError on violation of the parameter invariants.
    void validate() const;

    bool operator==(const CodeParams&) const = default;
};

// One cell of an index array: a (row, node) symbol reference, 1-based.
// (0,0) marks an unassigned extra-column slot.
struct IndexPair {
    std::uint32_t row = 0;
    std::uint32_t node = 0;

    bool is_zero() const { return row == 0 && node == 0; }
    bool operator==(const IndexPair&) const = default;
};

struct IndexArray {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<IndexPair> cells;

    IndexArray() = default;
    IndexArray(std::size_t r, std::size_t c) : rows(r), cols(c), cells(r * c) {}

    // 1-based accessors; the construction reasons in 1-based terms throughout.
    IndexPair& at(unsigned row, unsigned col) { return cells[(row - 1) * cols + (col - 1)]; }
    const IndexPair& at(unsigned row, unsigned col) const {
        return cells[(row - 1) * cols + (col - 1)];
    }

    bool operator==(const IndexArray&) const = default;
};

// The r index arrays. arrays[0] is P1 (alpha x k, identity layout); the rest
// carry ceil(k/r) extra columns that start as (0,0).
struct ParityPattern {
    unsigned k = 0;
    unsigned alpha = 0;
    unsigned extra_cols = 0;
    std::vector<IndexArray> arrays;

    unsigned r() const { return static_cast<unsigned>(arrays.size()); }

    bool operator==(const ParityPattern&) const = default;
};

// A valid partitioning of {1..alpha} for one systematic node. Subsets are
// sorted ascending internally and ordered by smallest element (empty subsets
// last, present only when alpha < r). rho is the 1-based index of the
// designated subset.
struct Partitioning {
    unsigned node = 0;
    std::vector<std::vector<unsigned>> subsets;
    unsigned rho = 0;

    const std::vector<unsigned>& designated() const { return subsets[rho - 1]; }

    bool operator==(const Partitioning&) const = default;
};

struct NodeGroups {
    std::vector<std::vector<unsigned>> groups;

    // 1-based group index of systematic node j.
    unsigned group_of(unsigned j) const;

    bool operator==(const NodeGroups&) const = default;
};

// Contiguous natural-order grouping: J_1 = {1..r}, J_2 = {r+1..2r}, ...;
// the last group is smaller when r does not divide k.
NodeGroups partition_nodes(const CodeParams& params);

// Condition 1: the designated subset consists of runs of `run` consecutive
// indexes (no wrap within a run), and when there are two or more runs every
// cyclic gap between consecutive runs equals `step` (counting the indexes
// strictly between them).
bool check_condition1(const Partitioning& p, unsigned run, unsigned step);

// Condition 2 over a full assignment: within-group partitionings identical
// as set families, designated subsets pairwise distinct globally, and - when
// the portion divides alpha - designated subsets within a group disjoint
// (covering {1..alpha} when the group is full).
bool check_condition2(const std::vector<Partitioning>& parts, const NodeGroups& groups);

// Construction state threaded through valid_partitioning as nodes are
// assigned one by one.
struct LayoutState {
    CodeParams params;
    NodeGroups groups;
    ParityPattern pattern;
    std::vector<Partitioning> partitions;
};

LayoutState make_initial_state(const CodeParams& params);

// One scheduled extra-column cell.
struct Placement {
    unsigned array = 0;  // parity array index l in 2..r
    unsigned row = 0;
    unsigned col = 0;
    IndexPair pair;
};

// Finds a partitioning for `node` (member of group `group_index`, 1-based)
// satisfying Condition 1 (when run != 0) and as much of Condition 2 as the
// parameter regime admits, with scheduling feasibility checked against the
// pattern. run = ceil(alpha/r^nu) in Phase 1 and 0 in Phase 2;
// step = portion - run. Throws NoValidPartition when the search space is
// exhausted.
Partitioning valid_partitioning(const LayoutState& state, unsigned portion, unsigned run,
                                unsigned step, unsigned group_index, unsigned node);

// Deterministic placements for the node's foreign symbols into the group's
// extra column. Throws NoValidPartition if they do not fit.
std::vector<Placement> plan_schedule(const LayoutState& state, const Partitioning& part,
                                     unsigned group_index);

// Runs valid_partitioning + plan_schedule for the node and commits the result.
void apply_partition(LayoutState& state, unsigned group_index, unsigned node);

struct LayoutResult {
    ParityPattern pattern;
    std::vector<Partitioning> partitions;
    NodeGroups groups;
};

// Full two-phase construction for the given parameters.
LayoutResult build_index_arrays(const CodeParams& params);

// Requires r | alpha (throws PreconditionViolated otherwise). True iff, for
// each group nu, every pair (i,j) with j in J_nu and i outside the node's
// designated subset appears in column k+nu of exactly one of P2..Pr and in no
// other extra column.
bool check_proposition2(const ParityPattern& pattern, const std::vector<Partitioning>& parts,
                        const NodeGroups& groups);

}  // namespace gsrc
