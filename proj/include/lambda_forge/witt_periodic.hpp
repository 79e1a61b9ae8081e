#ifndef LAMBDA_FORGE_WITT_PERIODIC_HPP
#define LAMBDA_FORGE_WITT_PERIODIC_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lambda_forge/exact_arith.hpp"
#include "lambda_forge/poly.hpp"
#include "lambda_forge/ray_class.hpp"

namespace lf {

/* Z, or Z[x]/(h) with h monic of degree >= 1, stored on the power basis
 * 1, x, ..., x^{d-1}. Both are torsion-free, so r in kR iff every
 * coordinate is divisible by k. Frobenius lifts phi_p are ring
 * endomorphisms given by the image of x; on Z they are the identity. */
class CoeffRing {
  public:
    using Elem = std::vector<BigInt>;
    using RatElem = std::vector<Rational>;

    static CoeffRing integers();
    static CoeffRing quotient(const IntPoly& h);
    /* "Z" or a monic polynomial in x; frob is "id", "p:x^p" (x -> x^p for
     * every prime) or "" for none */
    static CoeffRing parse(const std::string& ring, const std::string& frob = "");

    /* x -> x^p for every prime p */
    void set_power_frobenius();
    /* explicit phi_p(x) = image, checked immediately */
    void set_frobenius(std::uint64_t p, const IntPoly& image);

    bool is_integers() const { return modulus_.degree() <= 0; }
    const IntPoly& modulus() const { return modulus_; }
    bool power_frobenius() const { return power_rule_; }
    std::size_t rank() const { return rank_; }
    std::string describe() const;

    Elem zero() const { return Elem(rank_); }
    Elem one() const { return from_int(1); }
    Elem from_int(const BigInt& k) const;
    Elem generator() const;  // x (or 1 on Z)
    Elem from_poly(const IntPoly& p) const;
    Elem parse_elem(const std::string& s) const;
    std::string format(const Elem& e) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem scale(const Elem& a, const BigInt& k) const;
    Elem pow(const Elem& a, std::uint64_t e) const;
    bool divisible(const Elem& a, const BigInt& k) const;
    Elem div_exact(const Elem& a, const BigInt& k) const;

    RatElem to_rat(const Elem& a) const;
    RatElem rat_add(const RatElem& a, const RatElem& b) const;
    RatElem rat_mul(const RatElem& a, const RatElem& b) const;
    RatElem rat_pow(const RatElem& a, std::uint64_t e) const;
    bool is_integral(const RatElem& a) const;

    bool has_frobenius(std::uint64_t p) const;
    /* phi_p(a); InvalidInput when phi_p is not declared. The lift is
     * validated (well defined, Frobenius mod p, commuting with the lifts
     * validated before it) the first time it is used. */
    Elem frobenius(std::uint64_t p, const Elem& a) const;
    /* psi_a = composite of the phi_p over the prime factors of a */
    Elem adams(std::uint64_t a, const Elem& e) const;
    void validate_frobenius(std::uint64_t p) const;

  private:
    CoeffRing() = default;
    Elem reduce(std::vector<BigInt> c) const;
    RatElem reduce_rat(std::vector<Rational> c) const;
    const Elem& frobenius_image(std::uint64_t p) const;

    IntPoly modulus_;  // zero polynomial for Z
    std::size_t rank_ = 1;
    bool power_rule_ = false;
    std::map<std::uint64_t, Elem> explicit_;
    std::shared_ptr<std::map<std::uint64_t, Elem>> validated_ = std::make_shared<std::map<std::uint64_t, Elem>>();
};

/* A divisor-closed finite set of positive integers, ascending. */
class TruncationSet {
  public:
    explicit TruncationSet(std::vector<std::uint64_t> elems);
    static TruncationSet divisors_of(std::uint64_t n);
    static TruncationSet up_to(std::uint64_t bound);
    /* "div:6", "upto:10" or an explicit list "1,2,3,6" */
    static TruncationSet parse(const std::string& s);

    const std::vector<std::uint64_t>& elems() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool contains(std::uint64_t n) const;
    std::size_t index_of(std::uint64_t n) const;
    /* {b : a b in T} */
    TruncationSet divide(std::uint64_t a) const;
    bool operator==(const TruncationSet&) const = default;

  private:
    std::vector<std::uint64_t> elems_;
};

/* Components indexed by T in order: ghost components g_n or Witt
 * coordinates w_n, with g_n = sum_{d | n} d w_d^{n/d}. */
struct GhostVector {
    TruncationSet T;
    std::vector<CoeffRing::Elem> comp;
    const CoeffRing::Elem& at(std::uint64_t n) const { return comp[T.index_of(n)]; }
};

struct WittVector {
    TruncationSet T;
    std::vector<CoeffRing::Elem> coord;
};

struct RationalWitt {
    TruncationSet T;
    std::vector<CoeffRing::RatElem> coord;
    std::vector<bool> integral;
    bool all_integral() const;
    WittVector to_integral() const;  // PreconditionFailed unless all_integral
};

GhostVector ghost_from_witt(const CoeffRing& R, const WittVector& w);
RationalWitt witt_from_ghost(const CoeffRing& R, const GhostVector& g);
/* the same as witt_from_ghost(...).all_integral() but stops at the first
 * non-integral coordinate and never leaves R */
bool ghost_is_integral(const CoeffRing& R, const GhostVector& g);

/* g_{pn} = phi_p(g_n) mod p^{v_p(n)+1} whenever n, pn in T */
bool dwork_check(const CoeffRing& R, const GhostVector& g);

WittVector teichmuller(const CoeffRing& R, const CoeffRing::Elem& r, const TruncationSet& T);
GhostVector ghost_add(const CoeffRing& R, const GhostVector& a, const GhostVector& b);
GhostVector ghost_mul(const CoeffRing& R, const GhostVector& a, const GhostVector& b);
/* (psi_a g)_b = g_{ab}, on T / a */
GhostVector ghost_shift(const GhostVector& g, std::uint64_t a);
/* the lift of the identity of a ring with commuting Frobenius lifts:
 * ghost components (psi_a(r))_{a in T} */
GhostVector lambda_lift(const CoeffRing& R, const CoeffRing::Elem& r, const TruncationSet& T);

/* g_a = g_b whenever a, b in T are f-equivalent ideals in Id_P */
bool is_f_periodic(const GhostVector& g, const RationalDomain::Cycle& f,
                   const RationalDomain::Support& P = RationalDomain::Support::all());

/* psi_p(x) - x^p in p W_{T/p}(R) for the Witt vector x with ghost g;
 * PreconditionFailed if g itself fails the Dwork test */
bool frobenius_congruence_check(const CoeffRing& R, const GhostVector& g, std::uint64_t p);

/* Periodic ghost tuples (G_c), c in Z/n = DR(n inf), whose periodic
 * extension g_a = G_{a mod n} is a Witt vector over R. Coordinates of
 * the lattice: c * rank(R) + i for the coefficient of x^i in G_c. */
struct PeriodicWittLattice {
    std::uint64_t n = 0;
    std::uint64_t bound = 0;
    IntMatrix basis;       // HNF
    IntMatrix half_basis;  // the same with bound / 2
    bool stable = false;   // the two agree
    std::size_t rank() const { return basis.rows(); }
};

/* R must be Z, or Z[x]/(x^k - 1) with k | n and x -> x^p, so that phi_p
 * only depends on p mod n. Primes p not dividing n come in infinite
 * families with one residue and unbounded p-adic valuation; they impose
 * G_{pc} = phi_p(G_c). The same holds for p | n when v_p(c) >= v_p(n).
 * When v_p(c) < v_p(n) the valuation is pinned and the condition is a
 * congruence mod p^{v_p(c)+1}. On top of these the literal congruences
 * with p m <= bound are imposed. */
PeriodicWittLattice periodic_witt_lattice(std::uint64_t n, const CoeffRing& R, std::uint64_t bound);

enum class Verdict { holds, fails, inconclusive };
std::string verdict_name(Verdict v);

/* Z[x]/(x^n - 1) -> W^{n inf}, x -> ([zeta^a])_a, realized over Z[zeta_n].
 * L0 is the Galois-equivariant periodic ghost lattice G_{rc} = sigma_r G_c
 * (the conditions from primes not dividing n), I is the image. Every
 * coset of L0 / I is tested for Witt integrality on 1..bound and on
 * 1..bound/2. */
struct WittIsoReport {
    std::uint64_t n = 0;
    std::uint64_t bound = 0;
    std::size_t image_rank = 0;
    bool injective = false;
    bool teichmuller_integral = false;     // generators of the image are Witt vectors
    bool image_in_group_ring_lattice = false;  // x -> (x^a)_a lands in periodic_witt_lattice(Z[x]/(x^n-1))
    std::size_t group_ring_lattice_rank = 0;
    BigInt index;                         // [L0 : I]
    std::size_t cosets_passing = 0;       // at bound, zero coset included
    std::size_t cosets_passing_half = 0;  // at bound / 2
    bool stable = false;
    bool equal = false;                   // only the zero coset passes
    Verdict verdict = Verdict::inconclusive;
};

WittIsoReport ray_class_algebra_witt_iso_report(std::uint64_t n, std::uint64_t bound);
bool ray_class_algebra_witt_iso_check(std::uint64_t n, std::uint64_t bound);

/* Q (x) periodic Witt lattice as a product of fields: primitive
 * idempotents are 0/1 ghost tuples in the rational span */
struct FieldProductReport {
    std::uint64_t n = 0;
    std::size_t dimension = 0;
    std::vector<std::vector<int>> idempotents;  // primitive, as 0/1 over Z/n
    std::vector<std::size_t> factor_dims;        // ascending
    bool orthogonal_complete = false;            // pairwise disjoint, summing to 1
    bool ok = false;                             // count = d(n), dims = {phi(d) : d | n}
};

FieldProductReport periodic_witt_field_product_report(std::uint64_t n);
bool periodic_witt_field_product_check(std::uint64_t n);

}  // namespace lf

#endif  // LAMBDA_FORGE_WITT_PERIODIC_HPP
