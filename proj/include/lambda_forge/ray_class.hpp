#ifndef LAMBDA_FORGE_RAY_CLASS_HPP
#define LAMBDA_FORGE_RAY_CLASS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lambda_forge/error.hpp"
#include "lambda_forge/quad_field.hpp"

namespace lf {

/* A modulus: finite ideal part times (optionally) the real place.
 * Imaginary quadratic cycles never carry the real place. */
template <class Ideal>
struct CycleT {
    Ideal fin{};
    bool inf = false;

    bool operator==(const CycleT&) const = default;
};

enum class SupportMode { all, all_except, explicit_list };

/* The set P of primes allowed in Id_P. "all" and "all-except" are
 * Chebotarev dense; an explicit list is not, unless the caller insists
 * (and takes responsibility for the claim). */
template <class Ideal>
struct PrimeSupportT {
    SupportMode mode = SupportMode::all;
    std::vector<Ideal> primes;
    bool chebotarev_dense = true;

    static PrimeSupportT all() { return {}; }
    static PrimeSupportT all_except(std::vector<Ideal> excluded)
    {
        return {SupportMode::all_except, std::move(excluded), true};
    }
    static PrimeSupportT explicit_list(std::vector<Ideal> allowed, bool assert_dense = false)
    {
        return {SupportMode::explicit_list, std::move(allowed), assert_dense};
    }

    bool contains_prime(const Ideal& p) const
    {
        bool listed = false;
        for (auto const& q : primes) listed = listed || q == p;
        return mode == SupportMode::all || (mode == SupportMode::all_except ? !listed : listed);
    }
};

/* ------------------------------------------------------------------ */
/* Domains. Each one knows its ideals, its elements, its residue rings
 * and how to name ray classes. The generic code below uses nothing
 * else. */

class RationalDomain {
  public:
    using Ideal = std::uint64_t;
    using Elem = std::int64_t;
    using Cycle = CycleT<Ideal>;
    using Support = PrimeSupportT<Ideal>;

    Ideal one() const { return 1; }
    Ideal mul(Ideal a, Ideal b) const;
    Ideal gcd(Ideal a, Ideal b) const;
    Ideal div(Ideal a, Ideal b) const;
    bool divides(Ideal a, Ideal b) const { return b % a == 0; }
    std::uint64_t norm(Ideal a) const { return a; }
    bool less(Ideal a, Ideal b) const { return a < b; }
    std::vector<std::pair<Ideal, unsigned>> factor(Ideal a) const;
    std::vector<Ideal> divisors(Ideal a) const;
    std::vector<Ideal> ideals_of_norm(std::uint64_t n) const { return {n}; }
    std::string format(Ideal a) const { return std::to_string(a); }
    std::string format(const Cycle& f) const;
    Ideal parse_ideal(const std::string& s) const;
    Cycle parse_cycle(const std::string& s) const;
    Cycle make_cycle(Ideal fin, bool inf) const;
    Ideal parse_prime(const std::string& s) const;

    /* elements */
    Ideal principal(Elem x) const;
    Elem elem_mul(Elem x, Elem y) const;
    Elem elem_add(Elem x, Elem y) const;
    Elem elem_sub(Elem x, Elem y) const;
    bool elem_is_zero(Elem x) const { return x == 0; }
    bool totally_positive(Elem x) const { return x > 0; }
    /* units positive at the real places of f */
    std::vector<Elem> units_of(const Cycle& f) const;
    /* e = 1 mod m1, e = 0 mod m2 for coprime m1, m2 */
    Elem crt_idempotent(Ideal m1, Ideal m2) const;
    /* elements of the ideal m with coordinates bounded by r */
    std::vector<Elem> ideal_elements(Ideal m, std::int64_t r) const;

    class Residues {
      public:
        explicit Residues(Ideal m) : m_(m) {}
        std::size_t size() const { return m_; }
        std::size_t index(Elem x) const;
        Elem element(std::size_t i) const { return static_cast<Elem>(i); }
        bool is_unit(std::size_t i) const;
        std::size_t mul(std::size_t i, std::size_t j) const;

      private:
        Ideal m_;
    };
    Residues residues(Ideal m) const { return Residues(m); }

    /* Ray classes of a fixed modulus, named by a 64-bit key. */
    class RayContext {
      public:
        RayContext(Ideal m, bool inf) : m_(m), inf_(inf) {}
        std::uint64_t key(Ideal a) const;
        std::vector<std::uint64_t> keys() const;

      private:
        Ideal m_;
        bool inf_;
    };
    RayContext ray_context(const Cycle& m) const { return RayContext(m.fin, m.inf); }

    /* a = x b with x in 1 + f b^{-1}, x > 0 if the real place divides f */
    bool generator_equiv(Ideal a, Ideal b, const Cycle& f) const;

    std::uint64_t class_number() const { return 1; }
};

class QuadraticDomain {
  public:
    using Ideal = QuadIdeal;
    using Elem = QuadInt;
    using Cycle = CycleT<Ideal>;
    using Support = PrimeSupportT<Ideal>;

    explicit QuadraticDomain(const QuadField& K);

    const QuadField& field() const { return K_; }
    const ClassGroup& class_group() const { return *G_; }
    std::shared_ptr<const ClassGroup> class_group_ptr() const { return G_; }

    Ideal one() const { return K_.one(); }
    Ideal mul(const Ideal& a, const Ideal& b) const { return K_.ideal_mul(a, b); }
    Ideal gcd(const Ideal& a, const Ideal& b) const { return K_.ideal_gcd(a, b); }
    Ideal div(const Ideal& a, const Ideal& b) const { return K_.ideal_div(a, b); }
    bool divides(const Ideal& a, const Ideal& b) const { return K_.divides(a, b); }
    std::uint64_t norm(const Ideal& a) const { return static_cast<std::uint64_t>(a.norm()); }
    bool less(const Ideal& a, const Ideal& b) const { return ideal_less(a, b); }
    std::vector<std::pair<Ideal, unsigned>> factor(const Ideal& a) const { return K_.factor(a); }
    std::vector<Ideal> divisors(const Ideal& a) const { return K_.ideal_divisors(a); }
    std::vector<Ideal> ideals_of_norm(std::uint64_t n) const
    {
        return K_.ideals_of_norm(static_cast<std::int64_t>(n));
    }
    std::string format(const Ideal& a) const { return QuadField::format(a); }
    std::string format(const Cycle& f) const { return QuadField::format(f.fin); }
    Ideal parse_ideal(const std::string& s) const { return K_.parse_ideal(s); }
    Cycle parse_cycle(const std::string& s) const;
    Cycle make_cycle(const Ideal& fin, bool inf) const;
    Ideal parse_prime(const std::string& s) const;

    Ideal principal(const Elem& x) const { return K_.principal(x); }
    Elem elem_mul(const Elem& x, const Elem& y) const { return K_.mul(x, y); }
    Elem elem_add(const Elem& x, const Elem& y) const { return K_.add(x, y); }
    Elem elem_sub(const Elem& x, const Elem& y) const { return K_.sub(x, y); }
    bool elem_is_zero(const Elem& x) const { return x.a == 0 && x.b == 0; }
    bool totally_positive(const Elem&) const { return true; }
    std::vector<Elem> units_of(const Cycle&) const { return units_; }
    Elem crt_idempotent(const Ideal& m1, const Ideal& m2) const;
    std::vector<Elem> ideal_elements(const Ideal& m, std::int64_t r) const;

    class Residues {
      public:
        Residues(const QuadField& K, const Ideal& m) : R_(K, m) {}
        std::size_t size() const { return R_.size(); }
        std::size_t index(const Elem& x) const { return R_.index(x); }
        Elem element(std::size_t i) const { return R_.element(i); }
        bool is_unit(std::size_t i) const { return R_.is_unit(i); }
        std::size_t mul(std::size_t i, std::size_t j) const { return R_.mul(i, j); }

      private:
        ResidueRing R_;
    };
    Residues residues(const Ideal& m) const { return Residues(K_, m); }

    /* key = class index * N(m) + (least residue index in the unit orbit of
     * gamma mod m), where a * conj(r_i) = (gamma) for the chosen class
     * representative r_i of norm prime to N(m). */
    class RayContext {
      public:
        RayContext(const QuadraticDomain& D, const Ideal& m);
        std::uint64_t key(const Ideal& a) const;
        std::vector<std::uint64_t> keys() const;

      private:
        std::size_t canonical(std::size_t idx) const;

        QuadField K_;
        std::shared_ptr<const ClassGroup> G_;
        std::vector<Elem> units_;
        ResidueRing R_;
        std::vector<Ideal> conj_reps_;
    };
    RayContext ray_context(const Cycle& m) const { return RayContext(*this, m.fin); }

    bool generator_equiv(const Ideal& a, const Ideal& b, const Cycle& f) const;

    std::uint64_t class_number() const { return G_->order(); }

  private:
    QuadField K_;
    std::shared_ptr<const ClassGroup> G_;
    std::vector<Elem> units_;
};

/* ------------------------------------------------------------------ */

/* Cl_P(f): classes of ideals in Id_P coprime to f. Built by enumerating
 * ideals (dense P) or by closing up the classes of the allowed primes
 * (explicit P). Representative 0 is (1). */
template <class D>
class RayClassGroup {
  public:
    using Ideal = typename D::Ideal;
    using Cycle = typename D::Cycle;
    using Support = typename D::Support;

    RayClassGroup(const D& dom, const Cycle& f, const Support& P,
                  const Bounds& bounds = Bounds::from_env());

    const Cycle& cycle() const { return f_; }
    std::size_t order() const { return reps_.size(); }
    /* Cl_P(f) = Cl(f) */
    bool is_full() const { return reps_.size() == full_order_; }
    std::size_t full_order() const { return full_order_; }
    const std::vector<Ideal>& reps() const { return reps_; }
    const std::vector<std::vector<std::size_t>>& table() const;
    std::uint64_t key(const Ideal& a) const { return ctx_.key(a); }
    std::optional<std::size_t> index_of_key(std::uint64_t k) const;
    /* a coprime to f; throws PreconditionFailed if its class is outside Cl_P(f) */
    std::size_t index_of(const Ideal& a) const;
    std::size_t inverse(std::size_t i) const;

  private:
    D dom_;
    Cycle f_;
    typename D::RayContext ctx_;
    std::size_t full_order_ = 0;
    std::vector<Ideal> reps_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    mutable std::vector<std::vector<std::size_t>> table_;
};

/* DR_P(f) = disjoint union over d | f_fin, d in Id_P, of Cl_P(f/d). */
template <class D>
class DRMonoid {
  public:
    using Ideal = typename D::Ideal;
    using Cycle = typename D::Cycle;
    using Support = typename D::Support;

    struct Element {
        std::size_t part;  // index into divisor_parts()
        std::size_t unit;  // class index in Cl_P(f/d)
        Ideal rep;         // d * (class representative)
    };

    DRMonoid(const D& dom, const Cycle& f, const Support& P,
             const Bounds& bounds = Bounds::from_env());

    const D& domain() const { return dom_; }
    const Cycle& cycle() const { return f_; }
    const Support& support() const { return P_; }
    std::size_t size() const { return elements_.size(); }
    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<Ideal>& divisor_parts() const { return parts_; }
    const RayClassGroup<D>& part_group(std::size_t k) const { return groups_[k]; }
    std::size_t identity() const { return 0; }

    /* class of an ideal of Id_P */
    std::size_t classify(const Ideal& a) const;
    /* [d][a] . [d'][a'] = [d''][a''], d'' = gcd(dd', f), a'' = d a d' a' / d'' */
    std::size_t mul(std::size_t i, std::size_t j) const;
    /* Full table; BoundExceeded if size^2 is beyond the configured bound. */
    const std::vector<std::vector<std::size_t>>& table() const;
    std::vector<std::size_t> units() const;
    bool in_support(const Ideal& a) const;

  private:
    std::size_t part_of(const Ideal& d) const;

    D dom_;
    Cycle f_;
    Support P_;
    Bounds bounds_;
    std::vector<Ideal> parts_;
    std::vector<RayClassGroup<D>> groups_;
    std::vector<std::size_t> offsets_;
    std::vector<Element> elements_;
    mutable std::vector<std::vector<std::size_t>> table_;
};

/* f-equivalence with the per-divisor ray contexts cached, for callers
 * that test many pairs against one cycle. */
template <class D>
class EquivTester {
  public:
    using Ideal = typename D::Ideal;
    using Cycle = typename D::Cycle;
    using Support = typename D::Support;

    EquivTester(const D& dom, const Cycle& f, const Support& P);
    bool operator()(const Ideal& a, const Ideal& b) const;

  private:
    D dom_;
    Cycle f_;
    Support P_;
    std::vector<Ideal> parts_;
    std::vector<typename D::RayContext> ctx_;
};

template <class D>
bool in_support(const D& dom, const typename D::Ideal& a, const typename D::Support& P);

template <class D>
bool cycle_divides(const D& dom, const typename D::Cycle& small, const typename D::Cycle& big);

/* gcd with f_fin and ray class of the cofactor */
template <class D>
bool f_equiv(const D& dom, const typename D::Ideal& a, const typename D::Ideal& b,
             const typename D::Cycle& f, const typename D::Support& P);

/* a = x b with x in 1 + f_fin b^{-1}, positive at the real places of f */
template <class D>
bool f_equiv_generator(const D& dom, const typename D::Ideal& a, const typename D::Ideal& b,
                       const typename D::Cycle& f, const typename D::Support& P);

template <class D>
RayClassGroup<D> ray_class_group(const D& dom, const typename D::Cycle& f,
                                 const typename D::Support& P)
{
    return RayClassGroup<D>(dom, f, P);
}

template <class D>
DRMonoid<D> dr_monoid(const D& dom, const typename D::Cycle& f, const typename D::Support& P)
{
    return DRMonoid<D>(dom, f, P);
}

/* DR_P((n)inf) -> (Z/n_P)° x (Z/n^P)*, b |-> (b mod n_P, b mod n^P). */
struct ResidueIsoReport {
    std::uint64_t n_supported = 1;  // n_P
    std::uint64_t n_away = 1;       // n^P
    std::vector<std::pair<std::uint64_t, std::uint64_t>> image;
    bool bijective = false;
    bool multiplicative = false;
    std::size_t pairs_checked = 0;

    bool ok() const { return bijective && multiplicative; }
};
/* sample_pairs = 0 checks every pair; otherwise that many random pairs. */
ResidueIsoReport dr_iso_residue(const RationalDomain::Cycle& f, const RationalDomain::Support& P,
                                std::size_t sample_pairs = 0, std::uint64_t seed = 1);

struct PushoutReport {
    std::size_t pushout_size = 0;
    std::size_t dr_size = 0;
    bool well_defined = false;
    bool bijective = false;
    bool multiplicative = false;

    bool ok() const { return well_defined && bijective && multiplicative; }
};

/* (O/f_P)° (+)_{(O/f_P)*} Cl(f) -> DR_P(f), built as a quotient of the
 * product and compared with the monoid. DensityRequired for explicit P. */
template <class D>
PushoutReport dr_pushout_check(const D& dom, const typename D::Cycle& f,
                               const typename D::Support& P);

/* For class number one and P = all: DR(f) = (O/f_fin)° / O*_{f_inf}. */
template <class D>
PushoutReport class_number_one_check(const D& dom, const typename D::Cycle& f);

struct MonoidMapReport {
    std::vector<std::size_t> images;
    bool homomorphism = false;
    bool surjective = false;
    bool injective = false;
    bool consistent = false;  // agrees with classifying actual ideals

    bool ok() const { return homomorphism && surjective && consistent; }
};

/* DR(f_big) -> DR(f_small) for f_small | f_big. */
template <class D>
MonoidMapReport dr_canonical_map(const DRMonoid<D>& big, const DRMonoid<D>& small);

struct ShiftMapReport {
    std::vector<std::size_t> images;
    bool injective = false;
    bool proj_after_shift = false;  // in DR(f): proj(shift(x)) = [a] x
    bool shift_after_proj = false;  // in DR(fa): shift(proj(y)) = [a] y
    bool equivariant = false;

    bool ok() const { return injective && proj_after_shift && shift_after_proj && equivariant; }
};

/* DR(f) -> DR(f a), [b] |-> [ab]; `big` must be the monoid of f*a. */
template <class D>
ShiftMapReport dr_shift_map(const DRMonoid<D>& small, const DRMonoid<D>& big,
                            const typename D::Ideal& a);

/* DR_P(f) acting on itself, pointed at the identity. */
struct DRSet {
    std::size_t size = 0;
    std::size_t point = 0;
    std::vector<std::vector<std::size_t>> action;  // action[m][s]
};

template <class D>
DRSet free_dr_set(const DRMonoid<D>& M);

}  // namespace lf

#endif  // LAMBDA_FORGE_RAY_CLASS_HPP
