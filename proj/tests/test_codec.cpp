#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "gsrc/codec.hpp"

using namespace gsrc;

namespace {

GeneralizedCode code534(std::uint64_t seed = 1) {
    return construct_code(CodeParams{5, 3, 4, 4, seed}, std::nullopt, VerifyLevel::exhaustive());
}

Stripe random_stripe(std::mt19937_64& rng, const GeneralizedCode& code) {
    Stripe s(code.params.k, code.params.alpha);
    for (auto& v : s.symbols) v = static_cast<FieldElem>(rng() % code.field->order());
    return s;
}

// Independent parity oracle: re-walks the pattern cell by cell without going
// through encode().
FieldElem oracle_parity(const GeneralizedCode& code, const Stripe& s, unsigned i, unsigned l) {
    const IndexArray& arr = code.pattern.arrays[l - 1];
    FieldElem acc = 0;
    std::size_t ci = 0;
    for (unsigned c = 1; c <= arr.cols; ++c) {
        IndexPair cell = arr.at(i, c);
        if (cell.is_zero()) continue;
        FieldElem coef = code.coeffs.rows[l - 1][i - 1][ci++];
        acc = static_cast<FieldElem>(acc ^ code.field->mul(coef, s.at(cell.row, cell.node)));
    }
    return acc;
}

std::vector<NodeData> shards_for(const GeneralizedCode&, const CodedStripe& cs,
                                 const std::vector<unsigned>& nodes) {
    std::vector<NodeData> out;
    for (unsigned node : nodes) out.push_back({node, cs.node_symbols(node)});
    return out;
}

template <typename F>
void for_each_subset(unsigned n, unsigned k, F&& fn) {
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

}  // namespace

TEST_CASE("assign_coefficients yields an exhaustively verified (5,3,4) code") {
    GeneralizedCode code = code534();
    CHECK(code.verification.pass());
    CHECK(code.verification.exhaustive);
    CHECK(code.verification.subsets_checked == 10);  // C(5,3)

    // Nonzero everywhere, aligned with the occupied cells of each row.
    for (unsigned l = 1; l <= 2; ++l) {
        const IndexArray& arr = code.pattern.arrays[l - 1];
        for (unsigned i = 1; i <= 4; ++i) {
            std::size_t occupied = 0;
            for (unsigned c = 1; c <= arr.cols; ++c)
                if (!arr.at(i, c).is_zero()) ++occupied;
            const auto& crow = code.coeffs.rows[l - 1][i - 1];
            CHECK(crow.size() == occupied);
            for (FieldElem v : crow) CHECK(v != 0);
        }
    }
}

TEST_CASE("GF(2) cannot make (5,3,4) MDS: search exhausts") {
    LayoutResult lr = build_index_arrays(CodeParams{5, 3, 4, 1, 1});
    Field f2(1, 0x1);
    CHECK_THROWS_AS(assign_coefficients(lr.pattern, f2, 1, VerifyLevel::exhaustive()),
                    MdsSearchExhausted);
}

TEST_CASE("same seed, same table") {
    GeneralizedCode a = code534(42);
    GeneralizedCode b = code534(42);
    CHECK(a.coeffs == b.coeffs);
    GeneralizedCode c = code534(43);
    CHECK(a.coeffs.rows != c.coeffs.rows);
}

TEST_CASE("encode: zero stripe gives zero parities") {
    GeneralizedCode code = code534();
    CodedStripe cs = encode(code, Stripe(3, 4));
    for (FieldElem v : cs.parity) CHECK(v == 0);
}

TEST_CASE("encode: p_{1,2} combines exactly the expected symbol set") {
    GeneralizedCode code = code534();
    const IndexArray& p2 = code.pattern.arrays[1];
    std::set<std::pair<unsigned, unsigned>> refs;
    for (unsigned c = 1; c <= p2.cols; ++c) {
        IndexPair cell = p2.at(1, c);
        if (!cell.is_zero()) refs.insert({cell.row, cell.node});
    }
    CHECK(refs == std::set<std::pair<unsigned, unsigned>>{
                      {1, 1}, {1, 2}, {1, 3}, {3, 1}, {2, 3}});
}

TEST_CASE("encode matches the naive oracle and is linear") {
    GeneralizedCode code = code534();
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        Stripe a = random_stripe(rng, code);
        Stripe b = random_stripe(rng, code);
        CodedStripe ca = encode(code, a);
        for (unsigned l = 1; l <= 2; ++l)
            for (unsigned i = 1; i <= 4; ++i) CHECK(ca.p(i, l) == oracle_parity(code, a, i, l));

        Stripe sum(3, 4);
        for (std::size_t x = 0; x < sum.symbols.size(); ++x)
            sum.symbols[x] = static_cast<FieldElem>(a.symbols[x] ^ b.symbols[x]);
        CodedStripe cb = encode(code, b);
        CodedStripe csum = encode(code, sum);
        for (std::size_t x = 0; x < csum.parity.size(); ++x)
            CHECK(csum.parity[x] == (ca.parity[x] ^ cb.parity[x]));
    }
}

TEST_CASE("reconstruct from systematic nodes is a copy") {
    GeneralizedCode code = code534();
    std::mt19937_64 rng(9);
    Stripe s = random_stripe(rng, code);
    CodedStripe cs = encode(code, s);
    CHECK(reconstruct(code, shards_for(code, cs, {1, 2, 3})) == s);
}

TEST_CASE("reconstruct solves for missing systematic nodes") {
    GeneralizedCode code = code534();
    std::mt19937_64 rng(13);
    Stripe s = random_stripe(rng, code);
    CodedStripe cs = encode(code, s);
    CHECK(reconstruct(code, shards_for(code, cs, {2, 3, 4})) == s);     // d1 from p1
    CHECK(reconstruct(code, shards_for(code, cs, {3, 4, 5})) == s);     // d1,d2 from p1,p2
}

TEST_CASE("reconstruct validates the node count") {
    GeneralizedCode code = code534();
    Stripe s(3, 4);
    CodedStripe cs = encode(code, s);
    CHECK_THROWS_AS(reconstruct(code, shards_for(code, cs, {1, 2})), WrongNodeCount);
    CHECK_THROWS_AS(reconstruct(code, shards_for(code, cs, {1, 2, 3, 4})), WrongNodeCount);
    CHECK_THROWS_AS(reconstruct(code, shards_for(code, cs, {1, 1, 2})), WrongNodeCount);
    std::vector<NodeData> oob = shards_for(code, cs, {1, 2});
    oob.push_back({9, std::vector<FieldElem>(4, 0)});
    CHECK_THROWS_AS(reconstruct(code, oob), WrongNodeCount);
}

TEST_CASE("round-trip over every k-subset for (5,3,4) and (6,4,alpha)") {
    std::mt19937_64 rng(17);
    std::vector<CodeParams> configs = {
        {5, 3, 4, 4, 1}, {6, 4, 2, 4, 1}, {6, 4, 4, 4, 1}};
    for (const auto& cp : configs) {
        GeneralizedCode code = construct_code(cp, std::nullopt, VerifyLevel::exhaustive());
        REQUIRE(code.verification.pass());
        Stripe s = random_stripe(rng, code);
        CodedStripe cs = encode(code, s);
        for_each_subset(cp.n, cp.k, [&](const std::vector<unsigned>& subset) {
            CHECK(reconstruct(code, shards_for(code, cs, subset)) == s);
        });
    }
}

TEST_CASE("verify_mds flags a corrupted coefficient") {
    GeneralizedCode code = code534();
    CoefficientTable bad = code.coeffs;
    // Killing c_{1,1,1} severs a_{1,1} from the only p1 equation that can
    // reach it, so {d2,d3,p1} must fail.
    bad.rows[0][0][0] = 0;
    MdsReport report = verify_mds(code.pattern, bad, *code.field, VerifyLevel::exhaustive(),
                                  code.params.seed);
    CHECK_FALSE(report.pass());
    REQUIRE(!report.failures.empty());
    bool named = false;
    for (const auto& subset : report.failures) {
        CHECK(subset.size() == 3);
        CHECK(std::is_sorted(subset.begin(), subset.end()));
        if (subset == std::vector<unsigned>{2, 3, 4}) named = true;
    }
    CHECK(named);
}

TEST_CASE("a k-of-k systematic subset is always solvable") {
    GeneralizedCode code = code534();
    MdsReport report = verify_mds(code.pattern, code.coeffs, *code.field,
                                  VerifyLevel::exhaustive(), 1);
    CHECK(report.pass());
}

TEST_CASE("auto verification level resolves by cost") {
    CHECK(VerifyLevel{}.resolve(CodeParams{5, 3, 4, 4, 1}).kind ==
          VerifyLevel::Kind::Exhaustive);
    CHECK(VerifyLevel{}.resolve(CodeParams{14, 10, 64, 16, 1}).kind ==
          VerifyLevel::Kind::Sampled);
}

TEST_CASE("field bound reporting") {
    CHECK(mds_field_bound(CodeParams{5, 3, 4, 4, 1}) == 10ull * 2 * 4);
    CHECK(mds_field_bound(CodeParams{14, 10, 64, 16, 1}) == 1001ull * 4 * 64);
}
