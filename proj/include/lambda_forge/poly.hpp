#ifndef LAMBDA_FORGE_POLY_HPP
#define LAMBDA_FORGE_POLY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lambda_forge/exact_arith.hpp"

namespace lf {

/* Dense integer polynomial, constant term first, no trailing zeros. */
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> coeffs);
    static IntPoly constant(const BigInt& c);
    static IntPoly monomial(std::size_t k, const BigInt& c = 1);
    static IntPoly from_i64(const std::vector<std::int64_t>& coeffs);

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<BigInt>& coeffs() const { return c_; }
    BigInt coeff(std::size_t k) const { return k < c_.size() ? c_[k] : BigInt(0); }
    const BigInt& leading() const { return c_.back(); }

    bool operator==(const IntPoly&) const = default;
    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    IntPoly operator*(const BigInt& s) const;
    IntPoly operator-() const;

    IntPoly derivative() const;
    IntPoly reduce_mod(const BigInt& p) const;  // coefficients in [0, p)
    /* "y^5 - 5y^3 + 5y" */
    std::string format(const std::string& var = "y") const;

  private:
    void trim();
    std::vector<BigInt> c_;
};

/* "x^4 - 1", "-3x^2 + x + 7", "2*x"; whitespace ignored */
IntPoly parse_int_poly(const std::string& s, char var = 'x');

/* f(g(y)) */
IntPoly compose(const IntPoly& f, const IntPoly& g);
/* Division by a polynomial with leading coefficient +-1. */
std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& b);
bool divides_monic(const IntPoly& b, const IntPoly& a);
/* gcd over Q, normalized to be monic; for monic inputs it is integral */
IntPoly monic_gcd(const IntPoly& a, const IntPoly& b);
/* product of the distinct monic irreducible factors of a monic f */
IntPoly squarefree_part(const IntPoly& f);
bool is_squarefree(const IntPoly& f);

/* Laurent polynomial sum c[i] x^(low + i), trimmed at both ends. */
class LaurentPoly {
  public:
    LaurentPoly() = default;
    LaurentPoly(std::int64_t low, std::vector<BigInt> coeffs);
    static LaurentPoly monomial(std::int64_t k, const BigInt& c = 1);
    static LaurentPoly from_poly(const IntPoly& p);

    bool is_zero() const { return c_.empty(); }
    std::int64_t low() const { return low_; }
    std::int64_t high() const { return low_ + static_cast<std::int64_t>(c_.size()) - 1; }
    const std::vector<BigInt>& coeffs() const { return c_; }
    BigInt coeff(std::int64_t k) const;

    bool operator==(const LaurentPoly&) const = default;
    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;

    /* x -> x^a */
    LaurentPoly substitute_power(std::int64_t a) const;
    /* the same element up to a unit +-x^k of Z[x^{+-1}] */
    bool associate(const LaurentPoly& o) const;
    std::string format(const std::string& var = "x") const;

  private:
    void trim();
    std::int64_t low_ = 0;
    std::vector<BigInt> c_;
};

/* f(x + 1/x) */
LaurentPoly substitute_x_plus_inverse(const IntPoly& f);

/* Element of Z[x]/(x^n - 1), coefficient i in front of x^i. */
struct GroupRingElt {
    std::size_t n = 1;
    std::vector<BigInt> c;

    static GroupRingElt zero(std::size_t n);
    static GroupRingElt monomial(std::size_t n, std::int64_t k, const BigInt& coeff = 1);
    static GroupRingElt from_laurent(std::size_t n, const LaurentPoly& p);

    bool operator==(const GroupRingElt&) const = default;
    GroupRingElt operator+(const GroupRingElt& o) const;
    GroupRingElt operator-(const GroupRingElt& o) const;
    GroupRingElt operator*(const GroupRingElt& o) const;
    GroupRingElt sigma() const;  // x -> x^{-1}
    bool is_zero() const;
};

/* p(e) for an element e of Z[x]/(x^n-1) */
GroupRingElt evaluate(const IntPoly& p, const GroupRingElt& e);

}  // namespace lf

#endif  // LAMBDA_FORGE_POLY_HPP
