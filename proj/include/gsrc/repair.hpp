// Exact repair of a systematic node with symbol-level access accounting.
#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "gsrc/codec.hpp"
#include "gsrc/rational.hpp"

namespace gsrc {

// One stored symbol: row i of node (1..n; parity node l is k+l).
struct SymbolId {
    unsigned node = 0;
    unsigned row = 0;

    bool operator==(const SymbolId&) const = default;
    auto operator<=>(const SymbolId&) const = default;
};

// One single-unknown solve. Step-2 solves use P1 equations and read only
// step-1 symbols; step-5 solves use a parity row from P2..Pr and additionally
// consume step-2 outputs (repaired_inputs).
struct ScheduledSolve {
    unsigned unknown_row = 0;  // a_{unknown_row, failed}
    unsigned array = 0;        // parity array index l (1 for step 2)
    unsigned eq_row = 0;
    bool step2 = false;
    std::vector<SymbolId> reads;           // surviving-node symbols this equation needs
    std::vector<unsigned> repaired_inputs;  // failed-node rows it consumes
};

struct RepairPlan {
    CodeParams params;
    unsigned failed = 0;
    std::vector<unsigned> designated_rows;  // D_rho of the failed node
    std::vector<SymbolId> step1;            // rows D_rho of k-1 survivors plus p1
    std::vector<SymbolId> step3;            // rows D_rho of p2..pr
    std::vector<SymbolId> step4;            // extra reads the schedule needs
    std::vector<ScheduledSolve> schedule;   // step-2 solves first, then step-5
};

struct RepairTrace {
    std::uint64_t accessed = 0;
    std::uint64_t transferred = 0;
    Rational gamma;        // transferred / alpha, node-capacity units
    Rational lower_bound;  // (n-1)/alpha * ceil(alpha/r)
    Rational upper_bound;  // lower + (r-1)/alpha * ceil(alpha/r) * ceil(k/r)
};

// Plans the repair of systematic node `failed` (throws UsageError for parity
// nodes, UnsolvableSchedule when some unknown has no single-unknown
// equation).
RepairPlan plan_repair(const GeneralizedCode& code, unsigned failed);

// Executes the plan against surviving node data (node -> alpha symbols).
// Returns the failed node's alpha symbols. Throws MissingSymbol when a read
// is not covered.
std::vector<FieldElem> execute_repair(const GeneralizedCode& code, const RepairPlan& plan,
                                      const std::map<unsigned, std::vector<FieldElem>>& shards);

// Access/transfer totals and the exact repair bandwidth, checked against the
// lower/upper bounds (BoundViolation signals a construction bug).
RepairTrace bandwidth(const RepairPlan& plan);

// Sum of per-node transfers over all systematic nodes divided by the file
// size M = k*alpha.
Rational average_repair_bandwidth(const GeneralizedCode& code);

// Minimum-storage point: alpha_msr = M/k, gamma_msr = (M/k) * (n-1)/(n-k).
std::pair<Rational, Rational> msr_point(unsigned n, unsigned k, std::uint64_t M);

}  // namespace gsrc
