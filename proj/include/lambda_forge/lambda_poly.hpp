#ifndef LAMBDA_FORGE_LAMBDA_POLY_HPP
#define LAMBDA_FORGE_LAMBDA_POLY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lambda_forge/exact_arith.hpp"
#include "lambda_forge/poly.hpp"
#include "lambda_forge/ray_class.hpp"

namespace lf {

enum class Family { toric, chebyshev };
Family parse_family(const std::string& s);
std::string family_name(Family f);

/* psi_n(x + 1/x) = x^n + x^-n; recurrence psi_{n+1} = y psi_n - psi_{n-1} */
IntPoly chebyshev_psi(std::uint64_t n);
/* x -> x^a on Z[x^{+-1}] */
LaurentPoly toric_psi(std::int64_t a, const LaurentPoly& p);

/* psi_p(t) = t^p mod p on the generator t (x or y) */
bool frobenius_lift_check(Family family, std::uint64_t p);

/* m such that the f-periodic locus of G_m is mu_m: the gcd of |a - b|
 * over f-equivalent a, b <= bound in Id_P */
std::uint64_t gm_exponent_scan(const RationalDomain::Cycle& f, const RationalDomain::Support& P,
                               std::uint64_t bound);
/* the scan at 4n, asserted equal to the scan at 8n */
std::uint64_t gm_periodic_exponent(const RationalDomain::Cycle& f,
                                   const RationalDomain::Support& P = RationalDomain::Support::all());

/* squarefree part of psi_n - 2 */
IntPoly chebyshev_periodic_generator(std::uint64_t n);

struct EqualizerReport {
    std::uint64_t n = 0;
    std::uint64_t bound = 0;
    std::size_t pairs_checked = 0;
    bool q_divides_all = false;       // Q | psi_a - psi_b for a = +-b mod n
    bool generator_identity = false;  // Q(x + 1/x) ~ (x^n - 1)(x^g - 1), g = gcd(2, n)
    bool certificate = false;         // explicit combination of P_{n+1,1}, P_{n+2,2}
    bool ok() const { return q_divides_all && generator_identity && certificate; }
};

EqualizerReport chebyshev_equalizer_report(std::uint64_t n, std::uint64_t bound);
bool chebyshev_equalizer_check(std::uint64_t n, std::uint64_t bound);

/* u (x^a - 1) + v (x^b - 1) = x^gcd(a,b) - 1 */
std::pair<IntPoly, IntPoly> binomial_bezout(std::uint64_t a, std::uint64_t b);

struct PeriodicLocusReport {
    Family family = Family::chebyshev;
    RationalDomain::Cycle cycle;
    std::optional<IntPoly> Q;              // Chebyshev line
    std::optional<std::uint64_t> exponent;  // toric line: the locus is mu_m
    IntMatrix image_basis;                  // HNF, inside Z[x]/(x^n - 1)
    BigInt cokernel_order = 1;
    bool injective = false;
    bool matches_stated_basis = false;
};

/* basis of the sigma-invariants of Z[x]/(x^n - 1) */
IntMatrix sigma_invariant_lattice(std::uint64_t n);
/* 1, x + x^-1, ..., and 2 x^{n/2} for even n */
IntMatrix stated_image_basis(std::uint64_t n);
PeriodicLocusReport chebyshev_image_lattice(std::uint64_t n);
PeriodicLocusReport toric_periodic_locus(const RationalDomain::Cycle& f);

/* X(f) inside X[f], and X(af) inside psi_a^{-1} X(f) for a <= bound */
bool torsion_locus_contains_periodic(Family family, const RationalDomain::Cycle& f, std::uint64_t bound);

struct AlgebraMaps {
    std::uint64_t n = 0, n2 = 0;
    std::vector<std::uint64_t> u;  // x^i -> x^{u[i]} in Z[x]/(x^n2 - 1)
    std::vector<std::uint64_t> v;  // x^j -> x^{v[j]} in Z[x]/(x^n - 1)
    bool homomorphisms = false;
    bool v_after_u_is_psi = false;
    bool u_after_v_is_psi = false;
    bool u_injective = false;
    bool ok() const { return homomorphisms && v_after_u_is_psi && u_after_v_is_psi && u_injective; }
};

AlgebraMaps ray_class_algebra_maps(std::uint64_t n, std::uint64_t n2);

struct CotangentReport {
    std::uint64_t a = 0;
    std::vector<BigInt> torsion;  // invariant factors > 1 of I/I^2
    std::size_t free_rank = 0;
};

/* I/I^2 for the augmentation ideal I of Z[x]/(x^a - 1) */
CotangentReport cyclotomic_cotangent(std::uint64_t a);
std::size_t cyclotomic_cotangent_dim(std::uint64_t a, std::uint64_t q);

}  // namespace lf

#endif  // LAMBDA_FORGE_LAMBDA_POLY_HPP
