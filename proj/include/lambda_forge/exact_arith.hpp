#ifndef LAMBDA_FORGE_EXACT_ARITH_HPP
#define LAMBDA_FORGE_EXACT_ARITH_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lf {

using BigInt = mpz_class;
using Rational = mpq_class;

struct PrimePower {
    BigInt prime;
    unsigned exponent = 0;

    bool operator==(const PrimePower&) const = default;
};

/* value = prod prime^exponent, primes strictly increasing. */
struct Factorization {
    BigInt value;
    std::vector<PrimePower> factors;

    BigInt product() const;
};

bool is_prime(const BigInt& n);
Factorization factor(const BigInt& n);

/* Machine-word helpers for the desk-scale parts of the library. */
bool is_prime_u64(std::uint64_t n);
std::vector<std::pair<std::uint64_t, unsigned>> factor_u64(std::uint64_t n);
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);
unsigned valuation(std::uint64_t n, std::uint64_t p);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t pow_u64(std::uint64_t base, unsigned exp);
std::int64_t mod_floor(std::int64_t a, std::int64_t m);

/* Overflow-checked 64-bit arithmetic. Throws BoundExceeded. */
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

/* Dense row-major integer matrix. */
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<BigInt>>& rows,
                               std::size_t cols = 0);
    static IntMatrix from_rows_i64(const std::vector<std::vector<std::int64_t>>& rows,
                                   std::size_t cols = 0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    BigInt& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const BigInt& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    std::span<const BigInt> row(std::size_t r) const {
        return {entries_.data() + r * cols_, cols_};
    }
    std::vector<BigInt> row_vector(std::size_t r) const;
    void append_row(std::span<const BigInt> row);
    bool is_zero_row(std::size_t r) const;

    bool operator==(const IntMatrix&) const = default;

    std::string to_string() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> entries_;
};

/* Row-style Hermite normal form of the row lattice: nonzero rows first,
 * pivots positive and strictly increasing in column, entries above each
 * pivot reduced into [0, pivot). Zero rows are kept at the bottom so the
 * shape is unchanged. */
IntMatrix hnf(const IntMatrix& m);

/* The nonzero rows of hnf(m): a canonical basis of the row lattice. */
IntMatrix lattice_basis(const IntMatrix& m);

std::size_t lattice_rank(const IntMatrix& m);

/* Solves v = x * basis for integral x, where basis is in HNF (nonzero rows).
 * Returns nullopt if v is not in the row lattice. */
std::optional<std::vector<BigInt>> lattice_coordinates(const IntMatrix& basis,
                                                       std::span<const BigInt> v);

bool lattice_contains(const IntMatrix& lattice, std::span<const BigInt> v);
bool lattice_equal(const IntMatrix& a, const IntMatrix& b);

/* [sup : sub]. nullopt means the index is infinite (ranks differ).
 * Throws InvalidInput if sub is not contained in sup. */
std::optional<BigInt> lattice_index(const IntMatrix& sub, const IntMatrix& sup);

/* Invariant factors d1 | d2 | ... of the Smith normal form (nonzero ones
 * only; the rank is their count). */
std::vector<BigInt> smith_invariants(const IntMatrix& m);

/* Rank of the matrix reduced modulo a prime p. */
std::size_t rank_mod_p(const IntMatrix& m, std::uint64_t p);

/* Rank over Q. */
std::size_t rational_rank(const std::vector<std::vector<Rational>>& rows);

}  // namespace lf

#endif  // LAMBDA_FORGE_EXACT_ARITH_HPP
