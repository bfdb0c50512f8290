#include "gsrc/galois.hpp"

#include <array>

namespace gsrc {

namespace {

// Degree of a GF(2) polynomial given as a bit pattern (-1 for zero).
int poly_degree(std::uint32_t p) {
    int d = -1;
    while (p) {
        ++d;
        p >>= 1;
    }
    return d;
}

// Remainder of a mod b over GF(2)[x].
std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
    int db = poly_degree(b);
    for (int da = poly_degree(a); da >= db; da = poly_degree(a)) {
        a ^= b << (da - db);
    }
    return a;
}

// Smallest element of multiplicative order q-1, found by trial.
FieldElem find_generator(unsigned w, unsigned reduced_poly, std::uint32_t q) {
    if (q == 2) return 1;
    std::uint32_t group = q - 1;
    // Prime factors of the group order, by trial division (group < 2^16).
    std::array<std::uint32_t, 8> primes{};
    std::size_t np = 0;
    std::uint32_t m = group;
    for (std::uint32_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            primes[np++] = p;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) primes[np++] = m;

    for (std::uint32_t g = 2; g < q; ++g) {
        bool primitive = true;
        for (std::size_t i = 0; i < np && primitive; ++i) {
            // g^(group/p) == 1 would mean the order divides group/p.
            std::uint64_t e = group / primes[i];
            FieldElem acc = 1, base = static_cast<FieldElem>(g);
            while (e) {
                if (e & 1) acc = gf_mul_slow(w, reduced_poly, acc, base);
                base = gf_mul_slow(w, reduced_poly, base, base);
                e >>= 1;
            }
            if (acc == 1) primitive = false;
        }
        if (primitive) return static_cast<FieldElem>(g);
    }
    throw Error("no primitive element found (polynomial not irreducible?)");
}

}  // namespace

bool is_irreducible(unsigned w, unsigned reduced_poly) {
    if (w == 0 || w > 16) return false;
    if (reduced_poly >> w) return false;  // stray bits at or above x^w
    std::uint32_t full = (1u << w) | reduced_poly;
    if ((full & 1u) == 0) return false;  // divisible by x
    if (w == 1) return true;
    for (std::uint32_t d = 2; d < (2u << (w / 2)); ++d) {
        if (poly_degree(d) < 1) continue;
        if (poly_mod(full, d) == 0) return false;
    }
    return true;
}

FieldElem gf_mul_slow(unsigned w, unsigned reduced_poly, FieldElem a, FieldElem b) {
    std::uint32_t full = (1u << w) | reduced_poly;
    std::uint32_t acc = 0;
    std::uint32_t x = a;
    std::uint32_t y = b;
    while (y) {
        if (y & 1) acc ^= x;
        y >>= 1;
        x <<= 1;
        if (x >> w) x ^= full;
    }
    return static_cast<FieldElem>(acc);
}

unsigned Field::default_poly(unsigned w) {
    switch (w) {
        case 1: return 0x1;      // x + 1
        case 2: return 0x3;      // x^2 + x + 1
        case 3: return 0x3;      // x^3 + x + 1
        case 4: return 0x9;      // x^4 + x^3 + 1
        case 8: return 0x1D;     // x^8 + x^4 + x^3 + x^2 + 1
        case 16: return 0x100B;  // x^16 + x^12 + x^3 + x + 1
        default: throw Error("no default polynomial for w=" + std::to_string(w));
    }
}

Field::Field(unsigned w, unsigned reduced_poly) : w_(w), poly_(reduced_poly) {
    if (w == 0 || w > 16)
        throw Error("unsupported field width w=" + std::to_string(w));
    if (!is_irreducible(w, reduced_poly))
        throw Error("polynomial 0x" + std::to_string(reduced_poly) + " is reducible for w=" +
                    std::to_string(w));
    q_ = 1u << w_;
    generator_ = find_generator(w_, poly_, q_);

    log_.assign(q_, 0);
    exp_.assign(2 * (q_ - 1), 0);
    FieldElem v = 1;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
        exp_[i] = v;
        exp_[i + q_ - 1] = v;
        log_[v] = i;
        v = gf_mul_slow(w_, poly_, v, generator_);
    }
    if (v != 1) throw Error("generator order mismatch");
}

void Field::axpy(FieldElem c, const FieldElem* src, FieldElem* dst, std::size_t n) const {
    if (c == 0) return;
    const std::uint32_t lc = log_[c];
    const FieldElem* exp = exp_.data();
    const std::uint32_t* log = log_.data();
    for (std::size_t i = 0; i < n; ++i) {
        FieldElem s = src[i];
        if (s) dst[i] ^= exp[lc + log[s]];
    }
}

FieldMatrix FieldMatrix::identity(std::size_t n) {
    FieldMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FieldMatrix mat_mul(const Field& f, const FieldMatrix& a, const FieldMatrix& b) {
    if (a.cols != b.rows) throw Error("mat_mul dimension mismatch");
    FieldMatrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t t = 0; t < a.cols; ++t) {
            FieldElem c = a.at(i, t);
            if (c) f.axpy(c, b.row(t), out.row(i), b.cols);
        }
    }
    return out;
}

FieldMatrix mat_solve(const Field& f, FieldMatrix m, FieldMatrix rhs) {
    if (m.rows != m.cols) throw Error("mat_solve needs a square matrix");
    if (rhs.rows != m.rows) throw Error("mat_solve rhs row mismatch");
    const std::size_t n = m.rows;

    for (std::size_t col = 0; col < n; ++col) {
        // Partial pivoting by first nonzero entry keeps elimination
        // deterministic; there is no magnitude to compare over a finite field.
        std::size_t pivot = col;
        while (pivot < n && m.at(pivot, col) == 0) ++pivot;
        if (pivot == n) throw SingularMatrix();
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
            for (std::size_t c = 0; c < rhs.cols; ++c) std::swap(rhs.at(pivot, c), rhs.at(col, c));
        }
        FieldElem piv_inv = f.inv(m.at(col, col));
        for (std::size_t c = col; c < n; ++c) m.at(col, c) = f.mul(m.at(col, c), piv_inv);
        for (std::size_t c = 0; c < rhs.cols; ++c) rhs.at(col, c) = f.mul(rhs.at(col, c), piv_inv);
        for (std::size_t r = col + 1; r < n; ++r) {
            FieldElem factor = m.at(r, col);
            if (factor) {
                f.axpy(factor, m.row(col) + col, m.row(r) + col, n - col);
                f.axpy(factor, rhs.row(col), rhs.row(r), rhs.cols);
            }
        }
    }
    // Back substitution.
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t r = 0; r < col; ++r) {
            FieldElem factor = m.at(r, col);
            if (factor) {
                m.at(r, col) = 0;
                f.axpy(factor, rhs.row(col), rhs.row(r), rhs.cols);
            }
        }
    }
    return rhs;
}

std::size_t mat_rank(const Field& f, FieldMatrix m) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows && m.at(pivot, col) == 0) ++pivot;
        if (pivot == m.rows) continue;
        if (pivot != rank)
            for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        FieldElem piv_inv = f.inv(m.at(rank, col));
        for (std::size_t c = col; c < m.cols; ++c) m.at(rank, c) = f.mul(m.at(rank, c), piv_inv);
        for (std::size_t r = rank + 1; r < m.rows; ++r) {
            FieldElem factor = m.at(r, col);
            if (factor) f.axpy(factor, m.row(rank) + col, m.row(r) + col, m.cols - col);
        }
        ++rank;
    }
    return rank;
}

}  // namespace gsrc
