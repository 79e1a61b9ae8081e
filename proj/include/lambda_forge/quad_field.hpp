#ifndef LAMBDA_FORGE_QUAD_FIELD_HPP
#define LAMBDA_FORGE_QUAD_FIELD_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lambda_forge/error.hpp"

namespace lf {

/* Element a + b*w of O_K. Coordinates are machine words; every product
 * goes through checked arithmetic, so an overflow surfaces as
 * BoundExceeded instead of a wrong answer. */
struct QuadInt {
    std::int64_t a = 0;
    std::int64_t b = 0;

    auto operator<=>(const QuadInt&) const = default;
};

/* Ideal c*[a, b+w]: the Z-span of c*a and c*(b + w), with 0 <= b < a.
 * Every nonzero ideal has exactly one such form, so == is ideal equality. */
struct QuadIdeal {
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::int64_t c = 1;

    std::int64_t norm() const { return c * c * a; }
    bool operator==(const QuadIdeal&) const = default;
};

/* Deterministic total order: norm first, then the HNF entries. */
bool ideal_less(const QuadIdeal& x, const QuadIdeal& y);

enum class Splitting { split, inert, ramified };

struct PrimeAbove {
    QuadIdeal ideal;
    std::uint64_t p = 0;
    unsigned e = 1;  // ramification index
    unsigned f = 1;  // residue degree
    Splitting kind = Splitting::split;
};

class QuadField {
  public:
    /* d negative and squarefree; anything else is InvalidInput. */
    explicit QuadField(std::int64_t d);

    std::int64_t d() const { return d_; }
    std::int64_t disc() const { return disc_; }
    std::int64_t trace_w() const { return tr_; }  // Tr(w)
    std::int64_t norm_w() const { return nm_; }   // N(w)

    /* elements */
    QuadInt add(const QuadInt& x, const QuadInt& y) const;
    QuadInt sub(const QuadInt& x, const QuadInt& y) const;
    QuadInt mul(const QuadInt& x, const QuadInt& y) const;
    QuadInt conj(const QuadInt& x) const;
    std::int64_t norm(const QuadInt& x) const;
    std::string format(const QuadInt& x) const;

    /* all x with N(x) = n; finite because the norm form is definite */
    std::vector<QuadInt> elements_of_norm(std::int64_t n) const;
    std::vector<QuadInt> unit_group() const;

    /* ideals */
    QuadIdeal one() const { return {}; }
    QuadIdeal principal(const QuadInt& x) const;
    QuadIdeal ideal_mul(const QuadIdeal& x, const QuadIdeal& y) const;
    QuadIdeal ideal_gcd(const QuadIdeal& x, const QuadIdeal& y) const;
    QuadIdeal ideal_conj(const QuadIdeal& x) const;
    bool contains(const QuadIdeal& I, const QuadInt& x) const;
    bool divides(const QuadIdeal& x, const QuadIdeal& y) const;  // x | y
    /* y / x, requires x | y */
    QuadIdeal ideal_div(const QuadIdeal& y, const QuadIdeal& x) const;
    /* the two Z-basis elements */
    std::pair<QuadInt, QuadInt> basis(const QuadIdeal& I) const;

    std::vector<PrimeAbove> primes_above(std::uint64_t p) const;
    std::vector<std::pair<QuadIdeal, unsigned>> factor(const QuadIdeal& I) const;
    std::vector<QuadIdeal> ideals_of_norm(std::int64_t n) const;
    std::vector<QuadIdeal> ideal_divisors(const QuadIdeal& I) const;

    std::optional<QuadInt> is_principal(const QuadIdeal& I) const;

    /* The ideal with the given HNF triple; throws if it is not an ideal. */
    QuadIdeal make_ideal(std::int64_t a, std::int64_t b, std::int64_t c) const;
    QuadIdeal parse_ideal(const std::string& text) const;
    static std::string format(const QuadIdeal& I);

    bool operator==(const QuadField& o) const { return d_ == o.d_; }

  private:
    std::int64_t d_, disc_, tr_, nm_;
};

/* Reduced binary quadratic forms (a, b, c) of the given negative
 * discriminant, |b| <= a <= c, b >= 0 on the boundary. */
struct BinaryForm {
    std::int64_t a, b, c;
    bool operator==(const BinaryForm&) const = default;
};
std::vector<BinaryForm> reduced_forms(std::int64_t disc);

class ClassGroup {
  public:
    explicit ClassGroup(const QuadField& K);

    const QuadField& field() const { return K_; }
    std::size_t order() const { return reps_.size(); }
    const std::vector<QuadIdeal>& reps() const { return reps_; }
    const std::vector<std::vector<std::size_t>>& table() const { return table_; }
    /* index of the class of I; rep 0 is the trivial class */
    std::size_t index_of(const QuadIdeal& I) const;

  private:
    QuadField K_;
    std::vector<QuadIdeal> reps_;
    std::vector<QuadIdeal> conj_reps_;
    std::vector<std::vector<std::size_t>> table_;
};

/* O_K / m with residues numbered 0..N(m)-1. */
class ResidueRing {
  public:
    ResidueRing(const QuadField& K, const QuadIdeal& m, const Bounds& bounds = Bounds::from_env());

    std::size_t size() const { return static_cast<std::size_t>(A_ * C_); }
    std::size_t index(const QuadInt& x) const;
    QuadInt element(std::size_t idx) const;
    std::size_t mul(std::size_t i, std::size_t j) const;
    bool is_unit(std::size_t idx) const;
    std::vector<std::size_t> units() const;
    const QuadIdeal& modulus() const { return m_; }

  private:
    QuadField K_;
    QuadIdeal m_;
    std::int64_t A_, B_, C_;
    std::vector<QuadIdeal> primes_;
};

/* (O_K/f)* as an explicit element list with its multiplication table. */
struct ResidueUnits {
    std::vector<QuadInt> elements;
    std::vector<std::vector<std::size_t>> table;
};
ResidueUnits residue_units(const QuadField& K, const QuadIdeal& f,
                           const Bounds& bounds = Bounds::from_env());

}  // namespace lf

#endif  // LAMBDA_FORGE_QUAD_FIELD_HPP
