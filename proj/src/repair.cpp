#include "gsrc/repair.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace gsrc {

namespace {

const Partitioning& partition_of(const GeneralizedCode& code, unsigned node) {
    for (const auto& p : code.partitions)
        if (p.node == node) return p;
    throw Error("no partitioning recorded for node " + std::to_string(node));
}

}  // namespace

RepairPlan plan_repair(const GeneralizedCode& code, unsigned failed) {
    const CodeParams& cp = code.params;
    if (failed < 1 || failed > cp.k)
        throw UsageError("repair targets a systematic node in 1.." + std::to_string(cp.k));

    RepairPlan plan;
    plan.params = cp;
    plan.failed = failed;
    plan.designated_rows = partition_of(code, failed).designated();
    const auto& D = plan.designated_rows;
    const unsigned alpha = cp.alpha;
    const unsigned r = cp.r();

    std::set<SymbolId> have;  // symbols covered by steps 1 and 3
    for (unsigned j = 1; j <= cp.k; ++j) {
        if (j == failed) continue;
        for (unsigned i : D) {
            plan.step1.push_back({j, i});
            have.insert({j, i});
        }
    }
    for (unsigned i : D) {
        plan.step1.push_back({parity_node(cp.k, 1), i});
        have.insert({parity_node(cp.k, 1), i});
    }
    for (unsigned l = 2; l <= r; ++l)
        for (unsigned i : D) {
            plan.step3.push_back({parity_node(cp.k, l), i});
            have.insert({parity_node(cp.k, l), i});
        }

    // Step 2: each designated row is repaired from the matching P1 row,
    // whose only failed-node cell is the natural (i, failed).
    for (unsigned i : D) {
        ScheduledSolve s;
        s.unknown_row = i;
        s.array = 1;
        s.eq_row = i;
        s.step2 = true;
        for (unsigned j = 1; j <= cp.k; ++j)
            if (j != failed) s.reads.push_back({j, i});
        s.reads.push_back({parity_node(cp.k, 1), i});
        plan.schedule.push_back(std::move(s));
    }

    // Step 5: assign each remaining unknown the first parity equation (arrays
    // ascending, designated rows ascending) in which it is the sole unknown.
    std::set<unsigned> unsolved;
    for (unsigned i = 1; i <= alpha; ++i)
        if (!std::binary_search(D.begin(), D.end(), i)) unsolved.insert(i);

    std::set<std::pair<unsigned, unsigned>> used_eq;  // (array, row)
    bool progress = true;
    while (!unsolved.empty() && progress) {
        progress = false;
        for (unsigned l = 2; l <= r && !unsolved.empty(); ++l) {
            const IndexArray& arr = code.pattern.arrays[l - 1];
            for (unsigned i : D) {
                if (used_eq.count({l, i})) continue;
                std::vector<unsigned> eq_unknowns;
                for (unsigned c = 1; c <= arr.cols; ++c) {
                    IndexPair cell = arr.at(i, c);
                    if (!cell.is_zero() && cell.node == failed && unsolved.count(cell.row))
                        eq_unknowns.push_back(cell.row);
                }
                if (eq_unknowns.size() != 1) continue;

                unsigned target = eq_unknowns.front();
                ScheduledSolve s;
                s.unknown_row = target;
                s.array = l;
                s.eq_row = i;
                s.step2 = false;
                s.reads.push_back({parity_node(cp.k, l), i});
                for (unsigned c = 1; c <= arr.cols; ++c) {
                    IndexPair cell = arr.at(i, c);
                    if (cell.is_zero()) continue;
                    if (cell.node == failed) {
                        if (cell.row != target) s.repaired_inputs.push_back(cell.row);
                    } else {
                        s.reads.push_back({cell.node, cell.row});
                    }
                }
                used_eq.insert({l, i});
                unsolved.erase(target);
                plan.schedule.push_back(std::move(s));
                progress = true;
            }
        }
    }
    if (!unsolved.empty())
        throw UnsolvableSchedule("rows left without a single-unknown equation while repairing "
                                 "node " + std::to_string(failed));

    // Step 4: whatever the scheduled equations read beyond steps 1 and 3.
    std::set<SymbolId> extra;
    for (const auto& s : plan.schedule)
        for (const SymbolId& id : s.reads)
            if (!have.count(id)) extra.insert(id);
    plan.step4.assign(extra.begin(), extra.end());
    return plan;
}

std::vector<FieldElem> execute_repair(const GeneralizedCode& code, const RepairPlan& plan,
                                      const std::map<unsigned, std::vector<FieldElem>>& shards) {
    const CodeParams& cp = code.params;
    const Field& f = *code.field;

    auto lookup = [&](SymbolId id) -> FieldElem {
        auto it = shards.find(id.node);
        if (it == shards.end() || it->second.size() < id.row)
            throw MissingSymbol("missing symbol: node " + std::to_string(id.node) + " row " +
                                std::to_string(id.row));
        return it->second[id.row - 1];
    };

    std::vector<FieldElem> repaired(cp.alpha, 0);
    std::vector<bool> solved(cp.alpha + 1, false);

    for (const auto& s : plan.schedule) {
        const IndexArray& arr = code.pattern.arrays[s.array - 1];
        const auto& crow = code.coeffs.rows[s.array - 1][s.eq_row - 1];
        FieldElem acc = lookup({parity_node(cp.k, s.array), s.eq_row});
        FieldElem target_coef = 0;
        std::size_t ci = 0;
        for (unsigned c = 1; c <= arr.cols; ++c) {
            IndexPair cell = arr.at(s.eq_row, c);
            if (cell.is_zero()) continue;
            FieldElem coef = crow[ci++];
            if (cell.node == plan.failed) {
                if (cell.row == s.unknown_row) {
                    target_coef = coef;
                } else {
                    if (!solved[cell.row])
                        throw UnsolvableSchedule("schedule consumed an unsolved row");
                    acc = gf_add(acc, f.mul(coef, repaired[cell.row - 1]));
                }
            } else {
                acc = gf_add(acc, f.mul(coef, lookup({cell.node, cell.row})));
            }
        }
        if (target_coef == 0) throw UnsolvableSchedule("unknown absent from its equation");
        repaired[s.unknown_row - 1] = f.mul(f.inv(target_coef), acc);
        solved[s.unknown_row] = true;
    }
    return repaired;
}

RepairTrace bandwidth(const RepairPlan& plan) {
    const CodeParams& cp = plan.params;
    RepairTrace t;
    t.accessed = plan.step1.size() + plan.step3.size() + plan.step4.size();
    t.transferred = t.accessed;  // a buffer makes every read a single transfer

    const std::int64_t alpha = cp.alpha;
    const std::int64_t portion = cp.portion();
    t.gamma = Rational(static_cast<std::int64_t>(t.transferred), alpha);
    t.lower_bound = Rational(static_cast<std::int64_t>(cp.n - 1) * portion, alpha);
    t.upper_bound =
        t.lower_bound + Rational(static_cast<std::int64_t>(cp.r() - 1) * portion *
                                     cp.group_count(),
                                 alpha);
    if (t.gamma < t.lower_bound || t.gamma > t.upper_bound)
        throw BoundViolation("repair bandwidth " + t.gamma.str() + " outside [" +
                             t.lower_bound.str() + ", " + t.upper_bound.str() + "]");
    return t;
}

Rational average_repair_bandwidth(const GeneralizedCode& code) {
    Rational total(0);
    for (unsigned l = 1; l <= code.params.k; ++l) {
        RepairTrace t = bandwidth(plan_repair(code, l));
        total = total + Rational(static_cast<std::int64_t>(t.transferred));
    }
    return total / Rational(static_cast<std::int64_t>(code.params.message_symbols()));
}

std::pair<Rational, Rational> msr_point(unsigned n, unsigned k, std::uint64_t M) {
    if (k == 0 || k >= n) throw UsageError("msr_point requires 0 < k < n");
    Rational alpha_msr(static_cast<std::int64_t>(M), k);
    Rational gamma_msr = alpha_msr * Rational(n - 1, n - k);
    return {alpha_msr, gamma_msr};
}

}  // namespace gsrc
