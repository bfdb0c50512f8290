#include "gsrc/codec.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace gsrc {

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
}

std::uint64_t binomial_sat(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (unsigned i = 1; i <= k; ++i) {
        c = sat_mul(c, n - k + i);
        if (c == UINT64_MAX) return c;
        c /= i;
    }
    return c;
}

// All k-combinations of {1..n}, lexicographic.
template <typename F>
void for_each_combination(unsigned n, unsigned k, F&& fn) {
    std::vector<unsigned> c(k);
    for (unsigned i = 0; i < k; ++i) c[i] = i + 1;
    for (;;) {
        fn(c);
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && c[i] == n - k + 1 + i) --i;
        if (i < 0) break;
        ++c[i];
        for (unsigned j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
}

// Coefficient matrix of the erasure system for one k-subset: unknowns are the
// symbols of the missing systematic nodes, equations come from the supplied
// parity nodes. Returns an empty matrix when nothing is missing.
FieldMatrix subset_system(const ParityPattern& pattern, const CoefficientTable& coeffs,
                          const std::vector<unsigned>& subset) {
    const unsigned k = pattern.k;
    const unsigned alpha = pattern.alpha;

    std::vector<bool> present(k + pattern.r() + 1, false);
    for (unsigned node : subset) present[node] = true;

    std::vector<unsigned> missing;  // systematic nodes to solve for
    for (unsigned j = 1; j <= k; ++j)
        if (!present[j]) missing.push_back(j);
    std::vector<unsigned> parities;  // parity array indexes l
    for (unsigned l = 1; l <= pattern.r(); ++l)
        if (present[parity_node(k, l)]) parities.push_back(l);

    const std::size_t u = missing.size();
    if (u == 0) return {};

    std::vector<std::size_t> col_of(k + 1, SIZE_MAX);
    for (std::size_t t = 0; t < u; ++t) col_of[missing[t]] = t;

    FieldMatrix m(u * alpha, u * alpha);
    std::size_t row_idx = 0;
    for (unsigned l : parities) {
        const IndexArray& arr = pattern.arrays[l - 1];
        for (unsigned i = 1; i <= alpha; ++i, ++row_idx) {
            const auto& crow = coeffs.rows[l - 1][i - 1];
            std::size_t ci = 0;
            for (unsigned c = 1; c <= arr.cols; ++c) {
                IndexPair cell = arr.at(i, c);
                if (cell.is_zero()) continue;
                FieldElem coef = crow[ci++];
                if (col_of[cell.node] != SIZE_MAX)
                    m.at(row_idx, col_of[cell.node] * alpha + cell.row - 1) = coef;
            }
        }
    }
    return m;
}

bool subset_solvable(const Field& field, const ParityPattern& pattern,
                     const CoefficientTable& coeffs, const std::vector<unsigned>& subset) {
    FieldMatrix m = subset_system(pattern, coeffs, subset);
    if (m.rows == 0) return true;
    return mat_rank(field, m) == m.rows;
}

std::vector<std::vector<unsigned>> sampled_subsets(const ParityPattern& pattern, unsigned samples,
                                                   std::uint64_t seed) {
    const unsigned k = pattern.k;
    const unsigned r = pattern.r();
    const unsigned n = k + r;

    std::set<std::vector<unsigned>> subsets;
    // Every subset that uses all r parity nodes: the erasure system is
    // largest there. Empty family when r > k.
    if (r <= k) {
        for_each_combination(k, k - r, [&](const std::vector<unsigned>& sys) {
            std::vector<unsigned> s = sys;
            for (unsigned l = 1; l <= r; ++l) s.push_back(parity_node(k, l));
            std::sort(s.begin(), s.end());
            subsets.insert(std::move(s));
        });
    }

    std::mt19937_64 rng(seed ^ 0x5eedu);
    std::vector<unsigned> pool(n);
    for (unsigned i = 0; i < n; ++i) pool[i] = i + 1;
    for (unsigned t = 0; t < samples; ++t) {
        for (unsigned i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
            std::swap(pool[i], pool[j]);
        }
        std::vector<unsigned> s(pool.begin(), pool.begin() + k);
        std::sort(s.begin(), s.end());
        subsets.insert(std::move(s));
    }
    return {subsets.begin(), subsets.end()};
}

}  // namespace

VerifyLevel VerifyLevel::resolve(const CodeParams& params) const {
    if (kind != Kind::Auto) return *this;
    std::uint64_t dim = sat_mul(params.r(), params.alpha);
    std::uint64_t cost = sat_mul(binomial_sat(params.n, params.k), sat_mul(dim, sat_mul(dim, dim)));
    if (cost <= 10'000'000'000ull) return exhaustive();
    return sampled(200);
}

std::uint64_t mds_field_bound(const CodeParams& params) {
    return sat_mul(binomial_sat(params.n, params.k), sat_mul(params.r(), params.alpha));
}

MdsReport verify_mds(const ParityPattern& pattern, const CoefficientTable& coeffs,
                     const Field& field, VerifyLevel level, std::uint64_t seed,
                     bool stop_at_first_failure) {
    CodeParams probe{pattern.k + pattern.r(), pattern.k, pattern.alpha, field.w(), seed};
    VerifyLevel resolved = level.resolve(probe);

    MdsReport report;
    report.exhaustive = resolved.kind == VerifyLevel::Kind::Exhaustive;

    auto check = [&](const std::vector<unsigned>& subset) {
        ++report.subsets_checked;
        if (!subset_solvable(field, pattern, coeffs, subset)) {
            report.failures.push_back(subset);
            return !stop_at_first_failure;
        }
        return true;
    };

    if (report.exhaustive) {
        bool keep_going = true;
        for_each_combination(pattern.k + pattern.r(), pattern.k,
                             [&](const std::vector<unsigned>& s) {
                                 if (keep_going) keep_going = check(s);
                             });
    } else {
        for (const auto& s : sampled_subsets(pattern, resolved.samples, seed))
            if (!check(s)) break;
    }
    return report;
}

CoefficientTable assign_coefficients(const ParityPattern& pattern, const Field& field,
                                     std::uint64_t seed, VerifyLevel level, MdsReport* report) {
    if (field.order() < 2) throw Error("field too small");
    std::mt19937_64 rng(seed);
    const std::uint32_t nonzero = field.order() - 1;

    constexpr int kRetryBudget = 64;
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        CoefficientTable table;
        table.rows.resize(pattern.arrays.size());
        for (std::size_t l = 0; l < pattern.arrays.size(); ++l) {
            const IndexArray& arr = pattern.arrays[l];
            table.rows[l].resize(pattern.alpha);
            for (unsigned i = 1; i <= pattern.alpha; ++i) {
                auto& crow = table.rows[l][i - 1];
                for (unsigned c = 1; c <= arr.cols; ++c)
                    if (!arr.at(i, c).is_zero())
                        crow.push_back(static_cast<FieldElem>(1 + rng() % nonzero));
            }
        }
        MdsReport probe = verify_mds(pattern, table, field, level, seed,
                                     /*stop_at_first_failure=*/true);
        if (probe.pass()) {
            if (report)
                *report = verify_mds(pattern, table, field, level, seed,
                                     /*stop_at_first_failure=*/false);
            return table;
        }
    }
    throw MdsSearchExhausted("no MDS coefficient assignment found in " +
                             std::to_string(kRetryBudget) + " draws over GF(2^" +
                             std::to_string(field.w()) + ")");
}

std::vector<FieldElem> CodedStripe::node_symbols(unsigned node) const {
    const unsigned k = systematic.k;
    const unsigned alpha = systematic.alpha;
    std::vector<FieldElem> out(alpha);
    if (node <= k) {
        for (unsigned i = 1; i <= alpha; ++i) out[i - 1] = systematic.at(i, node);
    } else {
        for (unsigned i = 1; i <= alpha; ++i) out[i - 1] = p(i, node - k);
    }
    return out;
}

CodedStripe encode(const GeneralizedCode& code, const Stripe& s) {
    const unsigned alpha = code.params.alpha;
    if (s.k != code.params.k || s.alpha != alpha) throw Error("stripe dimension mismatch");

    CodedStripe out;
    out.systematic = s;
    out.r = code.params.r();
    out.parity.assign(std::size_t(out.r) * alpha, 0);
    const Field& f = *code.field;

    for (unsigned l = 1; l <= out.r; ++l) {
        const IndexArray& arr = code.pattern.arrays[l - 1];
        for (unsigned i = 1; i <= alpha; ++i) {
            const auto& crow = code.coeffs.rows[l - 1][i - 1];
            FieldElem acc = 0;
            std::size_t ci = 0;
            for (unsigned c = 1; c <= arr.cols; ++c) {
                IndexPair cell = arr.at(i, c);
                if (cell.is_zero()) continue;
                acc = gf_add(acc, f.mul(crow[ci++], s.at(cell.row, cell.node)));
            }
            out.p(i, l) = acc;
        }
    }
    return out;
}

std::vector<Stripe> reconstruct_stripes(const GeneralizedCode& code,
                                        const std::vector<unsigned>& nodes,
                                        const std::vector<std::vector<std::vector<FieldElem>>>& data) {
    const CodeParams& p = code.params;
    const unsigned alpha = p.alpha;
    const Field& f = *code.field;

    if (nodes.size() != p.k) throw WrongNodeCount("need exactly k=" + std::to_string(p.k) +
                                                  " nodes, got " + std::to_string(nodes.size()));
    std::set<unsigned> distinct(nodes.begin(), nodes.end());
    if (distinct.size() != nodes.size()) throw WrongNodeCount("duplicate node supplied");
    for (unsigned node : nodes)
        if (node < 1 || node > p.n) throw WrongNodeCount("node index out of range");
    if (data.size() != nodes.size()) throw Error("node data count mismatch");
    const std::size_t stripes = data.empty() ? 0 : data.front().size();
    for (const auto& d : data) {
        if (d.size() != stripes) throw Error("ragged stripe data");
        for (const auto& v : d)
            if (v.size() != alpha) throw MissingSymbol("node shard has wrong symbol count");
    }

    std::vector<std::size_t> index_of(p.n + 1, SIZE_MAX);
    for (std::size_t x = 0; x < nodes.size(); ++x) index_of[nodes[x]] = x;

    std::vector<unsigned> missing;
    for (unsigned j = 1; j <= p.k; ++j)
        if (index_of[j] == SIZE_MAX) missing.push_back(j);

    std::vector<Stripe> out(stripes, Stripe(p.k, alpha));
    // Copy through whatever arrived systematically.
    for (unsigned j = 1; j <= p.k; ++j) {
        if (index_of[j] == SIZE_MAX) continue;
        for (std::size_t sidx = 0; sidx < stripes; ++sidx)
            for (unsigned i = 1; i <= alpha; ++i) out[sidx].at(i, j) = data[index_of[j]][sidx][i - 1];
    }
    if (missing.empty()) return out;

    std::vector<unsigned> parities;
    for (unsigned l = 1; l <= p.r(); ++l)
        if (index_of[parity_node(p.k, l)] != SIZE_MAX) parities.push_back(l);

    const std::size_t u = missing.size();
    std::vector<std::size_t> col_of(p.k + 1, SIZE_MAX);
    for (std::size_t t = 0; t < u; ++t) col_of[missing[t]] = t;

    FieldMatrix m(u * alpha, u * alpha);
    FieldMatrix rhs(u * alpha, stripes);
    std::size_t row_idx = 0;
    for (unsigned l : parities) {
        const IndexArray& arr = code.pattern.arrays[l - 1];
        const auto& pdata = data[index_of[parity_node(p.k, l)]];
        for (unsigned i = 1; i <= alpha; ++i, ++row_idx) {
            for (std::size_t sidx = 0; sidx < stripes; ++sidx)
                rhs.at(row_idx, sidx) = pdata[sidx][i - 1];
            const auto& crow = code.coeffs.rows[l - 1][i - 1];
            std::size_t ci = 0;
            for (unsigned c = 1; c <= arr.cols; ++c) {
                IndexPair cell = arr.at(i, c);
                if (cell.is_zero()) continue;
                FieldElem coef = crow[ci++];
                if (col_of[cell.node] != SIZE_MAX) {
                    m.at(row_idx, col_of[cell.node] * alpha + cell.row - 1) = coef;
                } else {
                    for (std::size_t sidx = 0; sidx < stripes; ++sidx)
                        rhs.at(row_idx, sidx) =
                            gf_add(rhs.at(row_idx, sidx),
                                   f.mul(coef, out[sidx].at(cell.row, cell.node)));
                }
            }
        }
    }

    FieldMatrix x;
    try {
        x = mat_solve(f, std::move(m), std::move(rhs));
    } catch (const SingularMatrix&) {
        throw SingularSystem("erasure system singular; code is not MDS for this subset");
    }
    for (std::size_t t = 0; t < u; ++t)
        for (unsigned i = 1; i <= alpha; ++i)
            for (std::size_t sidx = 0; sidx < stripes; ++sidx)
                out[sidx].at(i, missing[t]) = x.at(t * alpha + i - 1, sidx);
    return out;
}

Stripe reconstruct(const GeneralizedCode& code, const std::vector<NodeData>& available) {
    std::vector<unsigned> nodes;
    std::vector<std::vector<std::vector<FieldElem>>> data;
    for (const auto& nd : available) {
        nodes.push_back(nd.node);
        data.push_back({nd.symbols});
    }
    return reconstruct_stripes(code, nodes, data).front();
}

GeneralizedCode construct_code(const CodeParams& params, std::optional<unsigned> poly,
                               VerifyLevel level) {
    params.validate();
    GeneralizedCode code;
    code.params = params;
    code.field = std::make_shared<Field>(params.w, poly ? *poly : Field::default_poly(params.w));

    LayoutResult layout = build_index_arrays(params);
    code.pattern = std::move(layout.pattern);
    code.partitions = std::move(layout.partitions);
    code.groups = std::move(layout.groups);

    code.coeffs = assign_coefficients(code.pattern, *code.field, params.seed, level,
                                      &code.verification);
    return code;
}

}  // namespace gsrc
