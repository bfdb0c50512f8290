// Arithmetic in GF(2^w) and dense linear algebra over it.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gsrc/errors.hpp"

namespace gsrc {

// A field element is an integer in [0, 2^w). Stored in 16 bits since w <= 16.
using FieldElem = std::uint16_t;

// Describes GF(2^w). `poly` holds the low w bits of the irreducible modulus;
// the leading x^w term is implicit (the GF(16) modulus x^4+x^3+1 is
// w=4, poly=0b1001).
struct FieldDesc {
    unsigned w = 0;
    unsigned poly = 0;

    bool operator==(const FieldDesc&) const = default;
};

// True iff x^w + (low bits of reduced_poly) is irreducible over GF(2).
// Exhaustive trial division by all lower-degree polynomials.
bool is_irreducible(unsigned w, unsigned reduced_poly);

// Carry-less multiply of a and b reduced modulo the full modulus polynomial.
// Table-free; used to bootstrap the log/antilog tables and as a test oracle
// hook (tests carry their own copy).
FieldElem gf_mul_slow(unsigned w, unsigned reduced_poly, FieldElem a, FieldElem b);

// Addition in characteristic 2 is XOR; it needs no field context.
inline FieldElem gf_add(FieldElem a, FieldElem b) { return static_cast<FieldElem>(a ^ b); }

// GF(2^w) with log/antilog multiplication. Immutable after construction and
// freely shareable between threads; every operation is a pure function.
//
// Widths 1..16 are constructible (the degenerate tiny fields make negative
// tests cheap); the codec and CLI restrict themselves to w in {4, 8, 16}.
class Field {
public:
    // Throws Error if reduced_poly is not irreducible for this w.
    Field(unsigned w, unsigned reduced_poly);

    // x^4+x^3+1 for w=4, x^8+x^4+x^3+x^2+1 for w=8, x^16+x^12+x^3+x+1 for w=16.
    static unsigned default_poly(unsigned w);
    static Field with_default_poly(unsigned w) { return Field(w, default_poly(w)); }

    unsigned w() const { return w_; }
    unsigned poly() const { return poly_; }
    std::uint32_t order() const { return q_; }  // q = 2^w
    FieldDesc desc() const { return FieldDesc{w_, poly_}; }

    FieldElem add(FieldElem a, FieldElem b) const { return gf_add(a, b); }

    FieldElem mul(FieldElem a, FieldElem b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }

    // Throws DivisionByZero when a == 0.
    FieldElem inv(FieldElem a) const {
        if (a == 0) throw DivisionByZero();
        return exp_[q_ - 1 - log_[a]];
    }

    FieldElem div(FieldElem a, FieldElem b) const {
        if (b == 0) throw DivisionByZero();
        if (a == 0) return 0;
        return exp_[log_[a] + q_ - 1 - log_[b]];
    }

    // dst[i] ^= c * src[i]; the elimination kernel.
    void axpy(FieldElem c, const FieldElem* src, FieldElem* dst, std::size_t n) const;

private:
    unsigned w_ = 0;
    unsigned poly_ = 0;
    std::uint32_t q_ = 0;
    FieldElem generator_ = 0;
    std::vector<FieldElem> exp_;   // size 2(q-1): g^i, doubled to skip the mod
    std::vector<std::uint32_t> log_;  // size q; log_[0] unused
};

// Dense row-major matrix over one field. Indices are 0-based here; the
// 1-based indexing conventions live in the layout types.
struct FieldMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<FieldElem> entries;

    FieldMatrix() = default;
    FieldMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0) {}

    FieldElem& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    FieldElem at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
    FieldElem* row(std::size_t r) { return entries.data() + r * cols; }
    const FieldElem* row(std::size_t r) const { return entries.data() + r * cols; }

    static FieldMatrix identity(std::size_t n);

    bool operator==(const FieldMatrix&) const = default;
};

FieldMatrix mat_mul(const Field& f, const FieldMatrix& a, const FieldMatrix& b);

// Solves m * x = rhs for square m (rhs may have many columns). Gaussian
// elimination with partial pivoting by first nonzero entry; throws
// SingularMatrix when no pivot exists.
FieldMatrix mat_solve(const Field& f, FieldMatrix m, FieldMatrix rhs);

// Rank via forward elimination; works for rectangular m.
std::size_t mat_rank(const Field& f, FieldMatrix m);

}  // namespace gsrc
