#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>

#include "gsrc/galois.hpp"

using namespace gsrc;

namespace {

// Independent multiplication oracle: schoolbook polynomial product followed
// by long division by the full modulus. Deliberately shares no code with
// Field's table path.
FieldElem oracle_mul(unsigned w, unsigned reduced_poly, FieldElem a, FieldElem b) {
    std::uint64_t prod = 0;
    for (unsigned i = 0; i < w; ++i)
        if ((a >> i) & 1) prod ^= static_cast<std::uint64_t>(b) << i;
    std::uint64_t full = (1ull << w) | reduced_poly;
    for (int d = 2 * w - 2; d >= static_cast<int>(w); --d)
        if ((prod >> d) & 1) prod ^= full << (d - w);
    return static_cast<FieldElem>(prod);
}

// Exhaustive inverse search oracle.
FieldElem oracle_inv(const Field& f, FieldElem a) {
    for (std::uint32_t y = 1; y < f.order(); ++y)
        if (oracle_mul(f.w(), f.poly(), a, static_cast<FieldElem>(y)) == 1)
            return static_cast<FieldElem>(y);
    return 0;
}

FieldMatrix random_matrix(std::mt19937_64& rng, const Field& f, std::size_t r, std::size_t c) {
    FieldMatrix m(r, c);
    for (auto& e : m.entries) e = static_cast<FieldElem>(rng() % f.order());
    return m;
}

FieldMatrix random_invertible(std::mt19937_64& rng, const Field& f, std::size_t n) {
    for (;;) {
        FieldMatrix m = random_matrix(rng, f, n, n);
        if (mat_rank(f, m) == n) return m;
    }
}

}  // namespace

TEST_CASE("gf_add is xor") {
    CHECK(gf_add(0x3, 0x3) == 0x0);
    CHECK(gf_add(0x0, 0x9) == 0x9);
    CHECK(gf_add(0x5, 0xA) == 0xF);
}

TEST_CASE("reference GF(16) modulus is constructible and multiplies correctly") {
    Field f(4, 0x9);  // x^4 + x^3 + 1
    CHECK(f.order() == 16);
    CHECK(f.mul(0x1, 0x2) == 0x2);
    CHECK(f.mul(0x0, 0x7) == 0x0);
    // x * x^3 = x^4 = x^3 + 1 under this modulus; frozen from the oracle.
    CHECK(oracle_mul(4, 0x9, 0x2, 0x8) == 0x9);
    CHECK(f.mul(0x2, 0x8) == 0x9);
}

TEST_CASE("gf_mul matches the long-division oracle exhaustively for w=4") {
    Field f(4, 0x9);
    for (unsigned a = 0; a < 16; ++a)
        for (unsigned b = 0; b < 16; ++b)
            CHECK(f.mul(a, b) == oracle_mul(4, 0x9, a, b));
}

TEST_CASE("gf_mul matches the oracle on random pairs for w=8 and w=16") {
    std::mt19937_64 rng(1);
    for (unsigned w : {8u, 16u}) {
        Field f = Field::with_default_poly(w);
        for (int t = 0; t < 10000; ++t) {
            auto a = static_cast<FieldElem>(rng() % f.order());
            auto b = static_cast<FieldElem>(rng() % f.order());
            CHECK(f.mul(a, b) == oracle_mul(w, f.poly(), a, b));
        }
    }
}

TEST_CASE("gf_inv") {
    Field f(4, 0x9);
    CHECK(f.inv(0x1) == 0x1);
    CHECK(oracle_inv(f, 0x2) == 0xC);
    CHECK(f.inv(0x2) == 0xC);
    CHECK_THROWS_AS(f.inv(0x0), DivisionByZero);
}

TEST_CASE("inverse is exhaustive for w=4 and w=8") {
    for (unsigned w : {4u, 8u}) {
        Field f = Field::with_default_poly(w);
        for (std::uint32_t a = 1; a < f.order(); ++a)
            CHECK(f.mul(static_cast<FieldElem>(a), f.inv(static_cast<FieldElem>(a))) == 1);
    }
}

TEST_CASE("field axioms over random triples") {
    std::mt19937_64 rng(7);
    for (unsigned w : {4u, 8u, 16u}) {
        Field f = Field::with_default_poly(w);
        for (int t = 0; t < 10000; ++t) {
            auto a = static_cast<FieldElem>(rng() % f.order());
            auto b = static_cast<FieldElem>(rng() % f.order());
            auto c = static_cast<FieldElem>(rng() % f.order());
            REQUIRE(f.add(a, b) == f.add(b, a));
            REQUIRE(f.mul(a, b) == f.mul(b, a));
            REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
            REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
            REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
            REQUIRE(f.add(a, 0) == a);
            REQUIRE(f.mul(a, 1) == a);
            REQUIRE(f.add(a, a) == 0);
            if (a) REQUIRE(f.mul(a, f.inv(a)) == 1);
        }
    }
}

TEST_CASE("reducible polynomials are rejected") {
    CHECK(is_irreducible(4, 0x9));
    CHECK_FALSE(is_irreducible(4, 0x1));  // x^4 + 1 = (x+1)^4
    CHECK_THROWS_AS(Field(4, 0x1), Error);
    CHECK(is_irreducible(1, 0x1));
    Field f2(1, 0x1);  // GF(2)
    CHECK(f2.mul(1, 1) == 1);
    CHECK(f2.inv(1) == 1);
}

TEST_CASE("div") {
    Field f(4, 0x9);
    for (unsigned a = 0; a < 16; ++a)
        for (unsigned b = 1; b < 16; ++b)
            CHECK(f.mul(f.div(a, b), b) == a);
    CHECK_THROWS_AS(f.div(3, 0), DivisionByZero);
}

TEST_CASE("mat_solve trivial cases") {
    Field f(4, 0x9);
    FieldMatrix id = FieldMatrix::identity(3);
    std::mt19937_64 rng(11);
    FieldMatrix rhs = random_matrix(rng, f, 3, 2);
    CHECK(mat_solve(f, id, rhs) == rhs);

    FieldMatrix a(1, 1), b(1, 1);
    a.at(0, 0) = 0x7;
    b.at(0, 0) = 0x5;
    FieldMatrix x = mat_solve(f, a, b);
    CHECK(x.at(0, 0) == f.mul(f.inv(0x7), 0x5));
}

TEST_CASE("mat_solve multiply-back on random invertible systems") {
    std::mt19937_64 rng(23);
    Field f16(4, 0x9);
    for (int t = 0; t < 20; ++t) {
        FieldMatrix m = random_invertible(rng, f16, 8);
        FieldMatrix x0 = random_matrix(rng, f16, 8, 3);
        FieldMatrix rhs = mat_mul(f16, m, x0);
        CHECK(mat_solve(f16, m, rhs) == x0);
    }
    Field f64k = Field::with_default_poly(16);
    for (std::size_t n : {16u, 64u}) {
        FieldMatrix m = random_invertible(rng, f64k, n);
        FieldMatrix x0 = random_matrix(rng, f64k, n, 2);
        FieldMatrix rhs = mat_mul(f64k, m, x0);
        CHECK(mat_solve(f64k, m, rhs) == x0);
    }
}

TEST_CASE("mat_solve rejects singular systems") {
    Field f(4, 0x9);
    FieldMatrix m(2, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(1, 0) = 1;
    m.at(1, 1) = 2;  // duplicated row
    FieldMatrix rhs(2, 1);
    rhs.at(0, 0) = 1;
    CHECK_THROWS_AS(mat_solve(f, m, rhs), SingularMatrix);
}

TEST_CASE("mat_rank") {
    Field f(4, 0x9);
    CHECK(mat_rank(f, FieldMatrix(3, 3)) == 0);
    CHECK(mat_rank(f, FieldMatrix::identity(4)) == 4);

    std::mt19937_64 rng(31);
    FieldMatrix m = random_matrix(rng, f, 4, 4);
    for (std::size_t c = 0; c < 4; ++c) m.at(3, c) = m.at(1, c);
    CHECK(mat_rank(f, m) <= 3);
}
