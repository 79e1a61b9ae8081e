#ifndef LAMBDA_FORGE_MODEL_CHECKER_HPP
#define LAMBDA_FORGE_MODEL_CHECKER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "lambda_forge/error.hpp"
#include "lambda_forge/ray_class.hpp"

namespace lf {

using Map = std::vector<std::uint32_t>;
using Subset = std::vector<std::uint32_t>;  // sorted, without repeats
using QCycle = RationalDomain::Cycle;

/* A finite set with commuting Frobenius data over Q.
 *
 * Galois data is an action of (Z/m)* (keys are residues mod m, so the
 * unique unit of Z/1 is 0). For a prime p outside `special`, psi_p is
 * *defined* to be the action of p mod m: whenever a model exists the
 * local theorem forces this, so nothing is lost. */
struct FiniteIdSet {
    std::size_t size = 0;
    std::uint64_t m = 1;
    std::map<std::uint64_t, Map> galois;
    std::map<std::uint64_t, Map> special;

    /* throws InvalidInput on a broken group action, missing primes of m
     * in `special`, or non-commuting data */
    void validate() const;

    const Map& galois_of(std::uint64_t u) const;  // u coprime to m, any representative
    Map psi(std::uint64_t p) const;                // p prime
    Map psi_ideal(std::uint64_t d) const;          // d >= 1, composite allowed
    Subset image(std::uint64_t d) const;           // dS
};

Map identity_map(std::size_t n);
Map compose(const Map& f, const Map& g);  // f after g
Subset apply_map(const Map& f, const Subset& T);
Subset full_subset(std::size_t n);

std::vector<std::uint64_t> units_mod(std::uint64_t m);

std::uint64_t compute_r(const FiniteIdSet& s);

/* conductor of the (Z/m)*-action restricted to the stable subset T */
QCycle conductor(std::uint64_t m, const std::map<std::uint64_t, Map>& galois, const Subset& T);
QCycle conductor(const FiniteIdSet& s, const Subset& T);

QCycle cycle_lcm(const QCycle& a, const QCycle& b);
bool cycle_divides(const QCycle& small, const QCycle& big);

/* lcm over d | r of d c(dS) */
QCycle lcm_bound(const FiniteIdSet& s);

/* ---- local data at one prime ---- */

struct FiniteGroup {
    std::vector<std::vector<std::size_t>> table;  // element 0 is the identity

    std::size_t order() const { return table.size(); }
    std::size_t mul(std::size_t a, std::size_t b) const { return table[a][b]; }
    std::size_t inverse(std::size_t a) const;
    void validate() const;
};

struct LocalIdSet {
    std::size_t size = 0;
    FiniteGroup group;
    std::vector<std::size_t> inertia;  // subgroup, as element indices
    std::size_t frobenius = 0;         // any element of the Frobenius coset
    std::vector<Map> action;           // action[g] : S -> S
    Map psi;

    void validate() const;
};

struct UnramifiedCore {
    Subset core;                      // S_0 = eventual image of psi
    std::vector<Subset> levels;       // levels[0] = S_0, then S_1, ...
    std::vector<std::size_t> level_of;
};

UnramifiedCore local_unramified_core(const LocalIdSet& s);
/* s in S_i goes to the unique s' in S_0 with psi^i s' = psi^i s;
 * PreconditionFailed if psi is not bijective on S_0 */
Map local_retraction(const LocalIdSet& s);
bool local_model_exists(const LocalIdSet& s);

/* Direct test: (g, psi^a) acts through the quotient monoid G_{1,n}. */
bool local_factors_through(const LocalIdSet& s, std::size_t n);

struct QuotientMonoid {
    std::size_t n = 0;
    std::size_t group_order = 0;
    std::vector<std::size_t> coset_of;  // group element -> coset index
    std::size_t coset_count = 0;
    std::vector<std::vector<std::size_t>> table;

    std::size_t size() const { return table.size(); }
    /* (g, a) with a < n, or the top component for a >= n */
    std::size_t element(std::size_t g, std::size_t a) const;
};

/* G_{N,n} with N trivial: n copies of G plus G/I, multiplied as
 * (g,a)(h,b) = (gh, a+b) below n and by the class of g h F^{a+b} above */
QuotientMonoid local_quotient_monoid(const FiniteGroup& G, const std::vector<std::size_t>& inertia,
                                     std::size_t frobenius, std::size_t n);

/* the decomposition data of s at the prime p */
LocalIdSet localize(const FiniteIdSet& s, std::uint64_t p);
bool model_exists(const FiniteIdSet& s);

/* ---- global decision ---- */

struct DRAction {
    DRMonoid<RationalDomain> monoid;
    std::vector<Map> action;  // indexed by DR element
};

/* The action of G x Id on S, tabulated through DR(f) if it factors. */
std::optional<std::vector<Map>> factor_through_dr(const FiniteIdSet& s,
                                                  const DRMonoid<RationalDomain>& M);

struct ModelDecision {
    bool local_models = false;
    QCycle bound;              // the lcm
    bool by_lcm = false;       // local models and lcm | f
    bool by_factoring = false; // direct tabulation through DR(f)
};

ModelDecision decide_model_report(const FiniteIdSet& s, const QCycle& f);
/* throws std::logic_error if the two verdicts disagree */
bool decide_model(const FiniteIdSet& s, const QCycle& f);
/* PreconditionFailed if no integral model exists */
QCycle minimal_cycle(const FiniteIdSet& s);
DRAction dr_action(const FiniteIdSet& s, const QCycle& f);

/* ---- sample data ---- */

FiniteIdSet mu_n(std::uint64_t n);
FiniteIdSet mu_n_mod_sign(std::uint64_t n);
FiniteIdSet one_point();
/* the free DR(f)-set, with Galois data through (Z/f)* */
FiniteIdSet free_id_set(const DRMonoid<RationalDomain>& M);

/* A disjoint union of blocks Z/N or (Z/N)/+-1 with N | m, where psi_p is
 * multiplication by p twisted by a random unit that may or may not
 * preserve the existence of a model. */
FiniteIdSet random_id_set(std::mt19937_64& rng, std::uint64_t max_m, std::size_t max_size);

}  // namespace lf

#endif  // LAMBDA_FORGE_MODEL_CHECKER_HPP
