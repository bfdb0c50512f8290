#include "gsrc/layout.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace gsrc {

namespace {


// r^nu capped just above alpha; only the comparison against alpha matters.
std::uint64_t pow_sat(std::uint64_t base, unsigned e, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (v > cap / (base ? base : 1)) return cap;
        v *= base;
        if (v >= cap) return cap;
    }
    return v;
}

std::vector<unsigned> sorted_difference(unsigned alpha, const std::vector<unsigned>& taken) {
    std::vector<unsigned> out;
    out.reserve(alpha - taken.size());
    std::size_t t = 0;
    for (unsigned i = 1; i <= alpha; ++i) {
        if (t < taken.size() && taken[t] == i) {
            ++t;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

using Family = std::vector<std::vector<unsigned>>;

void sort_family(Family& fam) {
    for (auto& s : fam) std::sort(s.begin(), s.end());
    std::sort(fam.begin(), fam.end(), [](const auto& a, const auto& b) {
        if (a.empty() || b.empty()) return b.empty() && !a.empty();  // empties last
        return a.front() < b.front();
    });
}

// Deals {1..alpha} into r bins in blocks of size B, block boundaries shifted
// cyclically by `offset`. Block b goes to bin b mod r. This reproduces the
// interleaved run structure of Condition 1 (runs of B separated by B(r-1))
// whenever B*r divides alpha, and degrades gracefully otherwise.
Family deal_blocks(unsigned alpha, unsigned r, unsigned B, unsigned offset) {
    Family fam(r);
    for (unsigned p = 1; p <= alpha; ++p) {
        unsigned b = ((p - 1 + alpha - (offset % alpha)) % alpha) / B;
        fam[b % r].push_back(p);
    }
    sort_family(fam);
    return fam;
}

// Candidate families for one node, most structured first: the phase's own
// block size, then the remaining sizes from portion down to 1, each with all
// cyclic offsets. Deduplicated.
std::vector<Family> family_candidates(unsigned alpha, unsigned r, unsigned portion,
                                      unsigned first_block) {
    std::vector<unsigned> sizes;
    sizes.push_back(first_block);
    for (unsigned B = portion; B >= 1; --B)
        if (B != first_block) sizes.push_back(B);

    std::vector<Family> out;
    std::set<Family> seen;
    for (unsigned B : sizes) {
        // Offsets over the full block period B*r: beyond B they rotate which
        // bin gets shorted when the dealing is ragged.
        unsigned span = std::min(B * r, alpha);
        for (unsigned o = 0; o < span; ++o) {
            Family fam = deal_blocks(alpha, r, B, o);
            if (seen.insert(fam).second) out.push_back(fam);
        }
    }
    return out;
}

// Last-resort family: designate the rows with the most free extra-column
// slots and deal the rest round-robin. Only consulted when every block
// family is unschedulable.
Family slot_driven_family(const LayoutState& state, unsigned portion, unsigned group_index) {
    const CodeParams& p = state.params;
    const unsigned col = p.k + group_index;
    const unsigned r = p.r();

    std::vector<std::pair<unsigned, unsigned>> rows;  // (-free, row)
    for (unsigned row = 1; row <= p.alpha; ++row) {
        unsigned free = 0;
        for (unsigned l = 2; l <= r; ++l)
            if (state.pattern.arrays[l - 1].at(row, col).is_zero()) ++free;
        rows.emplace_back(free, row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    Family fam(r);
    for (unsigned t = 0; t < portion && t < rows.size(); ++t) fam[0].push_back(rows[t].second);
    std::sort(fam[0].begin(), fam[0].end());
    unsigned bin = 1 % r;
    for (unsigned row = 1; row <= p.alpha; ++row) {
        if (std::binary_search(fam[0].begin(), fam[0].end(), row)) continue;
        fam[bin].push_back(row);
        bin = bin + 1 < r ? bin + 1 : (r > 1 ? 1 : 0);
    }
    sort_family(fam);
    return fam;
}

// Condition 1 with an escape hatch: `exact_step` checks the stated distance,
// while the relaxed form only requires equal cyclic gaps. The relaxed form is
// used as a construction fallback when the stated step admits no subset at
// all (possible for deep groups; the gap that actually tiles the cycle is
// B(r-1), which coincides with portion-run only for the first two group
// levels).
bool condition1_impl(const std::vector<unsigned>& designated, unsigned run, unsigned step,
                     unsigned alpha, bool exact_step) {
    if (designated.empty() || run == 0) return false;
    if (designated.size() % run != 0) return false;

    // Maximal runs of consecutive integers, non-wrapping.
    std::vector<std::pair<unsigned, unsigned>> runs;  // [first, last]
    unsigned first = designated[0], last = designated[0];
    for (std::size_t i = 1; i < designated.size(); ++i) {
        if (designated[i] == last + 1) {
            last = designated[i];
        } else {
            runs.emplace_back(first, last);
            first = last = designated[i];
        }
    }
    runs.emplace_back(first, last);

    for (auto [a, b] : runs)
        if (b - a + 1 != run) return false;
    if (runs.size() == 1) return true;

    // Cyclic gap between consecutive runs = indexes strictly between the end
    // of one run and the start of the next.
    for (std::size_t i = 0; i < runs.size(); ++i) {
        unsigned end = runs[i].second;
        unsigned next = runs[(i + 1) % runs.size()].first;
        unsigned gap = (i + 1 < runs.size()) ? next - end - 1 : alpha - end + next - 1;
        if (exact_step) {
            if (gap != step) return false;
        } else {
            unsigned expected = (alpha - static_cast<unsigned>(designated.size())) /
                                static_cast<unsigned>(runs.size());
            if (gap != expected) return false;
        }
    }
    return true;
}

std::vector<Placement> try_schedule(const LayoutState& state, const Family& family, unsigned rho,
                                    unsigned node, unsigned group_index, bool* ok) {
    *ok = true;
    const CodeParams& p = state.params;
    const unsigned col = p.k + group_index;
    const auto& S = family[rho - 1];
    const unsigned r = p.r();

    std::vector<Placement> placements;
    auto free_cell = [&](unsigned l, unsigned row) {
        const IndexArray& arr = state.pattern.arrays[l - 1];
        if (!arr.at(row, col).is_zero()) return false;
        for (const Placement& pl : placements)
            if (pl.array == l && pl.row == row) return false;
        return true;
    };

    bool clean = (p.alpha % r == 0) && family.size() == r &&
                 std::all_of(family.begin(), family.end(),
                             [&](const auto& s) { return s.size() == p.portion(); });
    if (clean) {
        // One non-designated subset per parity array, elements in ascending
        // order onto the designated rows in ascending order. The positional
        // bijection is what keeps foreign reads inside the reader's own rows.
        unsigned l = 2;
        for (unsigned idx = 1; idx <= family.size(); ++idx) {
            if (idx == rho) continue;
            const auto& subset = family[idx - 1];
            for (std::size_t e = 0; e < subset.size(); ++e) {
                unsigned row = S[e];
                if (!free_cell(l, row)) {
                    *ok = false;
                    return {};
                }
                placements.push_back(Placement{l, row, col, IndexPair{subset[e], node}});
            }
            ++l;
        }
        return placements;
    }

    // Greedy fallback for ragged regimes: fill each designated row across all
    // arrays before moving on, which leaves later rows free for nodes whose
    // designated subsets overlap this one.
    std::vector<unsigned> foreign = sorted_difference(p.alpha, S);
    for (unsigned elem : foreign) {
        bool placed = false;
        for (unsigned row : S) {
            for (unsigned l = 2; l <= r && !placed; ++l) {
                if (free_cell(l, row)) {
                    placements.push_back(Placement{l, row, col, IndexPair{elem, node}});
                    placed = true;
                }
            }
            if (placed) break;
        }
        if (!placed) {
            *ok = false;
            return {};
        }
    }
    return placements;
}

}  // namespace

std::uint64_t CodeParams::alpha_cap() const {
    return pow_sat(r(), group_count(), std::uint64_t(1) << 32);
}

void CodeParams::validate() const {
    if (k < 2) throw UsageError("k must be at least 2");
    if (n <= k) throw UsageError("n must exceed k");
    if (alpha < 1) throw UsageError("alpha must be at least 1");
    if (alpha > alpha_cap())
        throw UsageError("alpha " + std::to_string(alpha) + " exceeds the cap r^ceil(k/r) = " +
                         std::to_string(alpha_cap()));
    if (w < 1 || w > 16) throw UsageError("field width must be in 1..16");
}

unsigned NodeGroups::group_of(unsigned j) const {
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (unsigned v : groups[g])
            if (v == j) return static_cast<unsigned>(g + 1);
    throw Error("node " + std::to_string(j) + " not in any group");
}

NodeGroups partition_nodes(const CodeParams& params) {
    params.validate();
    NodeGroups out;
    const unsigned r = params.r();
    for (unsigned start = 1; start <= params.k; start += r) {
        std::vector<unsigned> g;
        for (unsigned j = start; j <= std::min(params.k, start + r - 1); ++j) g.push_back(j);
        out.groups.push_back(std::move(g));
    }
    return out;
}

bool check_condition1(const Partitioning& p, unsigned run, unsigned step) {
    unsigned alpha = 0;
    for (const auto& s : p.subsets) alpha += static_cast<unsigned>(s.size());
    return condition1_impl(p.designated(), run, step, alpha, /*exact_step=*/true);
}

bool check_condition2(const std::vector<Partitioning>& parts, const NodeGroups& groups) {
    std::map<unsigned, const Partitioning*> by_node;
    unsigned alpha = 0;
    for (const auto& p : parts) {
        by_node[p.node] = &p;
        alpha = 0;
        for (const auto& s : p.subsets) alpha += static_cast<unsigned>(s.size());
    }

    // Designated subsets pairwise distinct across all systematic nodes.
    std::set<std::vector<unsigned>> designated_seen;
    std::size_t portion = parts.empty() ? 0 : parts.front().designated().size();
    for (const auto& p : parts) {
        if (p.designated().size() != portion) return false;
        if (!designated_seen.insert(p.designated()).second) return false;
    }

    for (const auto& group : groups.groups) {
        const Partitioning* first = nullptr;
        std::vector<const Partitioning*> members;
        for (unsigned j : group) {
            auto it = by_node.find(j);
            if (it == by_node.end()) continue;
            members.push_back(it->second);
            if (!first) first = it->second;
        }
        // Identical set families within the group.
        for (const Partitioning* p : members)
            if (p->subsets != first->subsets) return false;

        if (portion > 0 && alpha % portion == 0) {
            std::set<unsigned> seen;
            std::size_t total = 0;
            for (const Partitioning* p : members) {
                for (unsigned v : p->designated()) {
                    if (!seen.insert(v).second) return false;  // overlap in group
                    ++total;
                }
            }
            if (total == alpha && seen.size() != alpha) return false;
        }
    }
    return true;
}

LayoutState make_initial_state(const CodeParams& params) {
    params.validate();
    LayoutState st;
    st.params = params;
    st.groups = partition_nodes(params);
    st.pattern.k = params.k;
    st.pattern.alpha = params.alpha;
    st.pattern.extra_cols = params.group_count();

    const unsigned r = params.r();
    st.pattern.arrays.reserve(r);
    for (unsigned l = 1; l <= r; ++l) {
        unsigned cols = params.k + (l >= 2 ? st.pattern.extra_cols : 0);
        IndexArray arr(params.alpha, cols);
        for (unsigned i = 1; i <= params.alpha; ++i)
            for (unsigned j = 1; j <= params.k; ++j) arr.at(i, j) = IndexPair{i, j};
        st.pattern.arrays.push_back(std::move(arr));
    }
    return st;
}

Partitioning valid_partitioning(const LayoutState& state, unsigned portion, unsigned run,
                                unsigned step, unsigned group_index, unsigned node) {
    const CodeParams& p = state.params;
    const unsigned r = p.r();
    const unsigned alpha = p.alpha;
    const bool phase1 = run != 0;
    const bool r_divides = alpha % r == 0;

    const auto& group = state.groups.groups[group_index - 1];
    std::vector<const Partitioning*> group_parts;
    std::map<std::vector<unsigned>, unsigned> global_use;
    std::set<std::vector<unsigned>> group_use;
    for (const auto& prev : state.partitions) {
        ++global_use[prev.designated()];
        if (std::find(group.begin(), group.end(), prev.node) != group.end()) {
            group_parts.push_back(&prev);
            group_use.insert(prev.designated());
        }
    }

    // When r | alpha the whole group shares one family; later members are
    // bound to the first member's choice.
    std::vector<Family> families;
    if (r_divides && !group_parts.empty()) {
        families.push_back(group_parts.front()->subsets);
    } else {
        families = family_candidates(alpha, r, portion, phase1 ? run : 1);
        Family rescue = slot_driven_family(state, portion, group_index);
        if (std::find(families.begin(), families.end(), rescue) == families.end())
            families.push_back(std::move(rescue));
    }

    auto attempt = [&](bool exact_step, int pass) -> Partitioning {
        for (const Family& family : families) {
            // Designated candidates in extra-column top-down scan order.
            std::vector<unsigned> order;  // 1-based subset indexes
            {
                std::set<unsigned> emitted;
                for (unsigned row = 1; row <= alpha; ++row) {
                    for (unsigned idx = 1; idx <= family.size(); ++idx) {
                        const auto& s = family[idx - 1];
                        if (s.size() == portion && !s.empty() && s.front() == row &&
                            emitted.insert(idx).second)
                            order.push_back(idx);
                    }
                }
            }
            if (pass == 2) {
                // Least-used first keeps reuse balanced when the candidate
                // space is smaller than the node count.
                std::stable_sort(order.begin(), order.end(), [&](unsigned a, unsigned b) {
                    auto ua = global_use.find(family[a - 1]);
                    auto ub = global_use.find(family[b - 1]);
                    unsigned ca = ua == global_use.end() ? 0 : ua->second;
                    unsigned cb = ub == global_use.end() ? 0 : ub->second;
                    return ca < cb;
                });
            }
            for (unsigned idx : order) {
                const auto& S = family[idx - 1];
                if (phase1 && !condition1_impl(S, run, step, alpha, exact_step)) continue;
                if (pass < 2 && group_use.count(S)) continue;
                if (pass == 0 && global_use.count(S)) continue;
                Partitioning cand{node, family, idx};
                bool ok = false;
                try_schedule(state, family, idx, node, group_index, &ok);
                if (!ok) continue;
                return cand;
            }
        }
        return Partitioning{};
    };

    for (int relax = 0; relax < (phase1 ? 2 : 1); ++relax) {
        for (int pass = 0; pass <= 2; ++pass) {
            if (pass == 2 && r_divides) continue;  // in-group distinctness stays hard
            Partitioning got = attempt(/*exact_step=*/relax == 0, pass);
            if (got.node != 0) return got;
        }
    }
    throw NoValidPartition("no valid partitioning for node " + std::to_string(node) +
                           " (alpha=" + std::to_string(alpha) + ", r=" + std::to_string(r) + ")");
}

std::vector<Placement> plan_schedule(const LayoutState& state, const Partitioning& part,
                                     unsigned group_index) {
    bool ok = false;
    auto placements = try_schedule(state, part.subsets, part.rho, part.node, group_index, &ok);
    if (!ok)
        throw NoValidPartition("schedule infeasible for node " + std::to_string(part.node));
    return placements;
}

void apply_partition(LayoutState& state, unsigned group_index, unsigned node) {
    const CodeParams& p = state.params;
    const unsigned portion = p.portion();
    std::uint64_t rpow = pow_sat(p.r(), group_index, std::uint64_t(1) << 32);
    unsigned run_formula = static_cast<unsigned>((p.alpha + rpow - 1) / rpow);
    unsigned run = run_formula > 1 ? run_formula : 0;  // 0 selects Phase 2 rules
    unsigned step = portion - run_formula;

    Partitioning part = valid_partitioning(state, portion, run, step, group_index, node);
    auto placements = plan_schedule(state, part, group_index);
    for (const Placement& pl : placements)
        state.pattern.arrays[pl.array - 1].at(pl.row, pl.col) = pl.pair;
    state.partitions.push_back(std::move(part));
}

LayoutResult build_index_arrays(const CodeParams& params) {
    LayoutState st = make_initial_state(params);
    for (std::size_t g = 0; g < st.groups.groups.size(); ++g)
        for (unsigned node : st.groups.groups[g])
            apply_partition(st, static_cast<unsigned>(g + 1), node);
    return LayoutResult{std::move(st.pattern), std::move(st.partitions), std::move(st.groups)};
}

bool check_proposition2(const ParityPattern& pattern, const std::vector<Partitioning>& parts,
                        const NodeGroups& groups) {
    const unsigned r = pattern.r();
    if (pattern.alpha % r != 0)
         throw PreconditionViolated("check_proposition2 requires r | alpha");

    std::map<unsigned, const Partitioning*> by_node;
    for (const auto& p : parts) by_node[p.node] = &p;

    // Occurrences of every scheduled pair, per extra column.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<unsigned>> where;
    for (unsigned l = 2; l <= r; ++l) {
        const IndexArray& arr = pattern.arrays[l - 1];
        for (unsigned col = pattern.k + 1; col <= arr.cols; ++col)
            for (unsigned i = 1; i <= pattern.alpha; ++i) {
                IndexPair c = arr.at(i, col);
                if (!c.is_zero()) where[{c.row, c.node}].push_back(col);
            }
    }

    for (std::size_t g = 0; g < groups.groups.size(); ++g) {
        unsigned col = pattern.k + static_cast<unsigned>(g + 1);
        for (unsigned j : groups.groups[g]) {
            auto it = by_node.find(j);
            if (it == by_node.end()) return false;
            const auto& desig = it->second->designated();
            for (unsigned i = 1; i <= pattern.alpha; ++i) {
                if (std::binary_search(desig.begin(), desig.end(), i)) continue;
                auto w = where.find({i, j});
                if (w == where.end()) return false;
                if (w->second.size() != 1 || w->second.front() != col) return false;
            }
        }
    }
    return true;
}

}  // namespace gsrc
