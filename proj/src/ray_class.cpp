#include "lambda_forge/ray_class.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <set>

#include "lambda_forge/exact_arith.hpp"

namespace lf {

namespace {

/* largest table we are willing to materialize */
constexpr std::size_t kMaxTableEntries = std::size_t{1} << 24;

std::int64_t inverse_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t g = m, x = 0, x1 = 1, r = mod_floor(a, m);
    while (r != 0) {
        std::int64_t q = g / r;
        std::tie(g, r) = std::make_pair(r, g - q * r);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) throw InvalidInput("inverse_mod: not invertible");
    return mod_floor(x, m);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

/* ------------------------------------------------------------------ */
/* Q */

RationalDomain::Ideal RationalDomain::mul(Ideal a, Ideal b) const
{
    Ideal r;
    if (__builtin_mul_overflow(a, b, &r)) throw BoundExceeded("ideal product overflows 64 bits");
    return r;
}

RationalDomain::Ideal RationalDomain::gcd(Ideal a, Ideal b) const { return gcd_u64(a, b); }

RationalDomain::Ideal RationalDomain::div(Ideal a, Ideal b) const
{
    if (b == 0 || a % b != 0) throw InvalidInput("ideal division is not exact");
    return a / b;
}

std::vector<std::pair<RationalDomain::Ideal, unsigned>> RationalDomain::factor(Ideal a) const
{
    return factor_u64(a);
}

std::vector<RationalDomain::Ideal> RationalDomain::divisors(Ideal a) const { return lf::divisors(a); }

std::string RationalDomain::format(const Cycle& f) const
{
    return std::to_string(f.fin) + (f.inf ? "*inf" : "");
}

RationalDomain::Ideal RationalDomain::parse_ideal(const std::string& s) const
{
    static const std::regex re(R"(\s*\(?\s*(\d+)\s*\)?\s*)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw InvalidInput("cannot parse ideal '" + s + "'");
    std::uint64_t v;
    try {
        v = std::stoull(m[1]);
    } catch (const std::out_of_range&) {
        throw InvalidInput("ideal out of range");
    }
    if (v == 0) throw InvalidInput("the zero ideal is not allowed");
    return v;
}

RationalDomain::Cycle RationalDomain::parse_cycle(const std::string& s) const
{
    static const std::regex re(R"(\s*(?:(\d+)\s*(\*\s*inf)?|(inf))\s*)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw InvalidInput("cannot parse cycle '" + s + "'");
    if (m[3].matched) return {1, true};
    return make_cycle(parse_ideal(m[1]), m[2].matched);
}

RationalDomain::Cycle RationalDomain::make_cycle(Ideal fin, bool inf) const
{
    if (fin == 0) throw InvalidInput("cycle: finite part must be positive");
    return {fin, inf};
}

RationalDomain::Ideal RationalDomain::parse_prime(const std::string& s) const
{
    Ideal p = parse_ideal(s);
    if (!is_prime_u64(p)) throw InvalidInput("'" + s + "' is not prime");
    return p;
}

RationalDomain::Ideal RationalDomain::principal(Elem x) const
{
    if (x == 0) throw InvalidInput("the zero ideal is not allowed");
    return static_cast<Ideal>(x < 0 ? -x : x);
}

RationalDomain::Elem RationalDomain::elem_mul(Elem x, Elem y) const { return checked_mul(x, y); }
RationalDomain::Elem RationalDomain::elem_add(Elem x, Elem y) const { return checked_add(x, y); }
RationalDomain::Elem RationalDomain::elem_sub(Elem x, Elem y) const { return checked_sub(x, y); }

std::vector<RationalDomain::Elem> RationalDomain::units_of(const Cycle& f) const
{
    if (f.inf) return {1};
    return {1, -1};
}

RationalDomain::Elem RationalDomain::crt_idempotent(Ideal m1, Ideal m2) const
{
    if (m1 == 1) return 0;
    auto a = static_cast<std::int64_t>(m1), b = static_cast<std::int64_t>(m2);
    return checked_mul(b, inverse_mod(b, a));
}

std::vector<RationalDomain::Elem> RationalDomain::ideal_elements(Ideal m, std::int64_t r) const
{
    std::vector<Elem> out;
    for (std::int64_t k = -r; k <= r; ++k) out.push_back(checked_mul(k, static_cast<Elem>(m)));
    return out;
}

std::size_t RationalDomain::Residues::index(Elem x) const
{
    return static_cast<std::size_t>(mod_floor(x, static_cast<std::int64_t>(m_)));
}

bool RationalDomain::Residues::is_unit(std::size_t i) const { return gcd_u64(i, m_) == 1; }

std::size_t RationalDomain::Residues::mul(std::size_t i, std::size_t j) const
{
    return static_cast<std::size_t>((static_cast<unsigned __int128>(i) * j) % m_);
}

std::uint64_t RationalDomain::RayContext::key(Ideal a) const
{
    std::uint64_t r = a % m_;
    if (!inf_) r = std::min(r, (m_ - r) % m_);
    return r;
}

std::vector<std::uint64_t> RationalDomain::RayContext::keys() const
{
    std::set<std::uint64_t> out;
    for (std::uint64_t u = 0; u < m_; ++u)
        if (gcd_u64(u, m_) == 1) out.insert(key(u));
    return {out.begin(), out.end()};
}

bool RationalDomain::generator_equiv(Ideal a, Ideal b, const Cycle& f) const
{
    /* x = +-a/b; (x - 1) b = +-a - b must lie in f_fin Z */
    auto n = static_cast<__int128>(f.fin);
    __int128 A = a, B = b;
    if ((A - B) % n == 0) return true;
    return !f.inf && (A + B) % n == 0;
}

/* ------------------------------------------------------------------ */
/* imaginary quadratic */

QuadraticDomain::QuadraticDomain(const QuadField& K)
    : K_(K), G_(std::make_shared<const ClassGroup>(K)), units_(K.unit_group())
{
}

QuadraticDomain::Cycle QuadraticDomain::parse_cycle(const std::string& s) const
{
    if (s.find("inf") != std::string::npos)
        throw InvalidInput("imaginary quadratic fields have no real places");
    return {K_.parse_ideal(s), false};
}

QuadraticDomain::Cycle QuadraticDomain::make_cycle(const Ideal& fin, bool inf) const
{
    if (inf) throw InvalidInput("imaginary quadratic fields have no real places");
    return {fin, false};
}

QuadraticDomain::Ideal QuadraticDomain::parse_prime(const std::string& s) const
{
    Ideal p = K_.parse_ideal(s);
    auto f = K_.factor(p);
    if (f.size() != 1 || f[0].second != 1) throw InvalidInput("'" + s + "' is not a prime ideal");
    return p;
}

QuadraticDomain::Elem QuadraticDomain::crt_idempotent(const Ideal& m1, const Ideal& m2) const
{
    if (m1 == one()) return {0, 0};
    auto [b1, b2] = K_.basis(m2);
    std::int64_t n = m1.norm();
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            Elem e = K_.add({b1.a * i, b1.b * i}, {b2.a * j, b2.b * j});
            if (K_.contains(m1, K_.sub({1, 0}, e))) return e;
        }
    throw InvalidInput("crt_idempotent: moduli are not coprime");
}

std::vector<QuadraticDomain::Elem> QuadraticDomain::ideal_elements(const Ideal& m, std::int64_t r) const
{
    auto [b1, b2] = K_.basis(m);
    std::vector<Elem> out;
    for (std::int64_t i = -r; i <= r; ++i)
        for (std::int64_t j = -r; j <= r; ++j)
            out.push_back(K_.add({checked_mul(b1.a, i), checked_mul(b1.b, i)},
                                 {checked_mul(b2.a, j), checked_mul(b2.b, j)}));
    return out;
}

QuadraticDomain::RayContext::RayContext(const QuadraticDomain& D, const Ideal& m)
    : K_(D.field()), G_(D.class_group_ptr()), units_(D.units_), R_(D.field(), m)
{
    std::vector<std::optional<Ideal>> reps(G_->order());
    std::size_t found = 0;
    auto Nm = static_cast<std::uint64_t>(m.norm());
    for (std::int64_t n = 1; found < reps.size(); ++n) {
        if (gcd_u64(static_cast<std::uint64_t>(n), Nm) != 1) continue;
        for (auto const& I : K_.ideals_of_norm(n)) {
            auto i = G_->index_of(I);
            if (!reps[i]) {
                reps[i] = I;
                ++found;
            }
        }
    }
    for (auto const& r : reps) conj_reps_.push_back(K_.ideal_conj(*r));
}

std::size_t QuadraticDomain::RayContext::canonical(std::size_t idx) const
{
    std::size_t best = idx;
    QuadInt x = R_.element(idx);
    for (auto const& u : units_) best = std::min(best, R_.index(K_.mul(u, x)));
    return best;
}

std::uint64_t QuadraticDomain::RayContext::key(const Ideal& a) const
{
    std::size_t i = G_->index_of(a);
    auto gamma = K_.is_principal(K_.ideal_mul(a, conj_reps_[i]));
    if (!gamma) throw PreconditionFailed("ray class key: class representative mismatch");
    return static_cast<std::uint64_t>(i) * R_.size() + canonical(R_.index(*gamma));
}

std::vector<std::uint64_t> QuadraticDomain::RayContext::keys() const
{
    std::set<std::uint64_t> out;
    auto units = R_.units();
    for (std::size_t i = 0; i < conj_reps_.size(); ++i)
        for (auto u : units) out.insert(static_cast<std::uint64_t>(i) * R_.size() + canonical(u));
    return {out.begin(), out.end()};
}

bool QuadraticDomain::generator_equiv(const Ideal& a, const Ideal& b, const Cycle& f) const
{
    /* x b = a  <=>  x N(b) = gamma with (gamma) = a conj(b); x is gamma/N(b) up to units */
    auto gamma = K_.is_principal(K_.ideal_mul(a, K_.ideal_conj(b)));
    if (!gamma) return false;
    std::int64_t nb = b.norm();
    auto [b1, b2] = K_.basis(b);
    for (auto const& u : units_) {
        Elem xn = K_.mul(u, *gamma);
        bool ok = true;
        for (auto const& beta : {b1, b2}) {
            /* (x - 1) beta = (xn - nb) beta / nb */
            Elem w = K_.mul(K_.sub(xn, {nb, 0}), beta);
            if (w.a % nb != 0 || w.b % nb != 0) {
                ok = false;
                break;
            }
            if (!K_.contains(f.fin, {w.a / nb, w.b / nb})) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

/* ------------------------------------------------------------------ */
/* generic helpers */

template <class D>
bool in_support(const D& dom, const typename D::Ideal& a, const typename D::Support& P)
{
    if (P.mode == SupportMode::all) return true;
    for (auto const& [p, e] : dom.factor(a))
        if (!P.contains_prime(p)) return false;
    return true;
}

template <class D>
bool cycle_divides(const D& dom, const typename D::Cycle& small, const typename D::Cycle& big)
{
    return dom.divides(small.fin, big.fin) && (!small.inf || big.inf);
}

namespace {

template <class D>
typename D::Ideal supported_part(const D& dom, const typename D::Ideal& n, const typename D::Support& P)
{
    auto out = dom.one();
    for (auto const& [p, e] : dom.factor(n))
        if (P.contains_prime(p))
            for (unsigned k = 0; k < e; ++k) out = dom.mul(out, p);
    return out;
}

/* A lift x = base (mod m), nonzero and totally positive, with (x) in Id_P
 * if asked; the one of least norm in the first box that has any. */
template <class D>
typename D::Elem lift_residue(const D& dom, const typename D::Elem& base, const typename D::Ideal& m,
                              const typename D::Support& P, bool need_support)
{
    for (std::int64_t r = 0; r <= 64; ++r) {
        std::optional<typename D::Elem> best;
        std::uint64_t best_norm = 0;
        for (auto const& lam : dom.ideal_elements(m, r)) {
            auto x = dom.elem_add(base, lam);
            if (dom.elem_is_zero(x) || !dom.totally_positive(x)) continue;
            auto I = dom.principal(x);
            if (need_support && !in_support(dom, I, P)) continue;
            auto n = dom.norm(I);
            if (!best || n < best_norm || (n == best_norm && x < *best)) {
                best = x;
                best_norm = n;
            }
        }
        if (best) return *best;
    }
    throw BoundExceeded("no lift of the residue with support in P was found");
}

}  // namespace

/* ------------------------------------------------------------------ */

template <class D>
RayClassGroup<D>::RayClassGroup(const D& dom, const Cycle& f, const Support& P, const Bounds& bounds)
    : dom_(dom), f_(f), ctx_(dom.ray_context(f))
{
    auto all = ctx_.keys();
    full_order_ = all.size();
    if (full_order_ > bounds.monoid_size)
        throw BoundExceeded("ray class group of order " + std::to_string(full_order_) +
                            " exceeds the configured bound");
    auto add = [&](const Ideal& a) {
        auto k = ctx_.key(a);
        if (index_.emplace(k, reps_.size()).second) reps_.push_back(a);
    };
    auto coprime = [&](const Ideal& a) { return dom.gcd(a, f.fin) == dom.one(); };
    if (P.chebotarev_dense) {
        for (std::uint64_t n = 1; reps_.size() < full_order_; ++n) {
            if (n > bounds.residue_norm)
                throw BoundExceeded("ray class representatives not found below the norm bound");
            for (auto const& a : dom.ideals_of_norm(n))
                if (coprime(a) && in_support(dom, a, P)) add(a);
        }
    } else {
        add(dom.one());
        std::vector<Ideal> gens;
        for (auto const& p : P.primes)
            if (coprime(p)) gens.push_back(p);
        for (std::size_t i = 0; i < reps_.size(); ++i)
            for (auto const& g : gens) add(dom.mul(reps_[i], g));
    }
}

template <class D>
const std::vector<std::vector<std::size_t>>& RayClassGroup<D>::table() const
{
    if (table_.empty()) {
        if (order() * order() > kMaxTableEntries)
            throw BoundExceeded("ray class table too large to materialize");
        table_.assign(order(), std::vector<std::size_t>(order()));
        for (std::size_t i = 0; i < order(); ++i)
            for (std::size_t j = i; j < order(); ++j)
                table_[i][j] = table_[j][i] = index_of(dom_.mul(reps_[i], reps_[j]));
    }
    return table_;
}

template <class D>
std::optional<std::size_t> RayClassGroup<D>::index_of_key(std::uint64_t k) const
{
    auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

template <class D>
std::size_t RayClassGroup<D>::index_of(const Ideal& a) const
{
    auto i = index_of_key(ctx_.key(a));
    if (!i) throw PreconditionFailed("ideal class lies outside Cl_P(f)");
    return *i;
}

template <class D>
std::size_t RayClassGroup<D>::inverse(std::size_t i) const
{
    for (std::size_t j = 0; j < order(); ++j)
        if (table()[i][j] == 0) return j;
    throw PreconditionFailed("ray class table is not a group");
}

/* ------------------------------------------------------------------ */

template <class D>
DRMonoid<D>::DRMonoid(const D& dom, const Cycle& f, const Support& P, const Bounds& bounds)
    : dom_(dom), f_(f), P_(P), bounds_(bounds)
{
    std::size_t total = 0;
    for (auto const& d : dom.divisors(f.fin)) {
        if (!lf::in_support(dom, d, P)) continue;
        Cycle g = dom.make_cycle(dom.div(f.fin, d), f.inf);
        parts_.push_back(d);
        groups_.emplace_back(dom, g, P, bounds);
        offsets_.push_back(total);
        total += groups_.back().order();
        if (total > bounds.monoid_size)
            throw BoundExceeded("DR monoid exceeds the configured size bound");
    }
    for (std::size_t k = 0; k < parts_.size(); ++k)
        for (std::size_t u = 0; u < groups_[k].order(); ++u)
            elements_.push_back({k, u, dom.mul(parts_[k], groups_[k].reps()[u])});
}

template <class D>
bool DRMonoid<D>::in_support(const Ideal& a) const
{
    return lf::in_support(dom_, a, P_);
}

template <class D>
std::size_t DRMonoid<D>::part_of(const Ideal& d) const
{
    for (std::size_t k = 0; k < parts_.size(); ++k)
        if (parts_[k] == d) return k;
    throw InvalidInput("ideal is not supported at P");
}

template <class D>
std::size_t DRMonoid<D>::classify(const Ideal& a) const
{
    if (!in_support(a)) throw InvalidInput("ideal " + dom_.format(a) + " is not supported at P");
    auto d = dom_.gcd(a, f_.fin);
    auto k = part_of(d);
    return offsets_[k] + groups_[k].index_of(dom_.div(a, d));
}

template <class D>
std::size_t DRMonoid<D>::mul(std::size_t i, std::size_t j) const
{
    const auto& x = elements_.at(i);
    const auto& y = elements_.at(j);
    auto dd = dom_.mul(parts_[x.part], parts_[y.part]);
    auto d2 = dom_.gcd(dd, f_.fin);
    auto a2 = dom_.div(dom_.mul(dom_.mul(dd, groups_[x.part].reps()[x.unit]),
                                groups_[y.part].reps()[y.unit]),
                       d2);
    auto k = part_of(d2);
    return offsets_[k] + groups_[k].index_of(a2);
}

template <class D>
const std::vector<std::vector<std::size_t>>& DRMonoid<D>::table() const
{
    if (table_.empty() && !elements_.empty()) {
        if (size() * size() > kMaxTableEntries)
            throw BoundExceeded("DR monoid table too large to materialize");
        table_.assign(size(), std::vector<std::size_t>(size()));
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i; j < size(); ++j) table_[i][j] = table_[j][i] = mul(i, j);
    }
    return table_;
}

template <class D>
std::vector<std::size_t> DRMonoid<D>::units() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (elements_[i].part == 0) out.push_back(i);
    return out;
}

/* ------------------------------------------------------------------ */

template <class D>
EquivTester<D>::EquivTester(const D& dom, const Cycle& f, const Support& P) : dom_(dom), f_(f), P_(P)
{
    for (auto const& d : dom.divisors(f.fin)) {
        parts_.push_back(d);
        ctx_.push_back(dom.ray_context(dom.make_cycle(dom.div(f.fin, d), f.inf)));
    }
}

template <class D>
bool EquivTester<D>::operator()(const Ideal& a, const Ideal& b) const
{
    if (!in_support(dom_, a, P_) || !in_support(dom_, b, P_))
        throw InvalidInput("ideal is not supported at P");
    auto d = dom_.gcd(a, f_.fin);
    if (!(dom_.gcd(b, f_.fin) == d)) return false;
    for (std::size_t k = 0; k < parts_.size(); ++k)
        if (parts_[k] == d) return ctx_[k].key(dom_.div(a, d)) == ctx_[k].key(dom_.div(b, d));
    throw PreconditionFailed("gcd is not a divisor of the cycle");
}

template <class D>
bool f_equiv(const D& dom, const typename D::Ideal& a, const typename D::Ideal& b,
             const typename D::Cycle& f, const typename D::Support& P)
{
    if (!in_support(dom, a, P) || !in_support(dom, b, P))
        throw InvalidInput("ideal is not supported at P");
    auto d = dom.gcd(a, f.fin);
    if (!(dom.gcd(b, f.fin) == d)) return false;
    auto ctx = dom.ray_context(dom.make_cycle(dom.div(f.fin, d), f.inf));
    return ctx.key(dom.div(a, d)) == ctx.key(dom.div(b, d));
}

template <class D>
bool f_equiv_generator(const D& dom, const typename D::Ideal& a, const typename D::Ideal& b,
                       const typename D::Cycle& f, const typename D::Support& P)
{
    if (!in_support(dom, a, P) || !in_support(dom, b, P))
        throw InvalidInput("ideal is not supported at P");
    return dom.generator_equiv(a, b, f);
}

/* ------------------------------------------------------------------ */

ResidueIsoReport dr_iso_residue(const RationalDomain::Cycle& f, const RationalDomain::Support& P,
                                std::size_t sample_pairs, std::uint64_t seed)
{
    if (!f.inf)
        throw PreconditionFailed("the residue description of DR over Q needs the real place in f");
    RationalDomain Q;
    DRMonoid<RationalDomain> M(Q, f, P);
    ResidueIsoReport rep;
    rep.n_supported = supported_part(Q, f.fin, P);
    rep.n_away = f.fin / rep.n_supported;
    const auto nP = rep.n_supported, nA = rep.n_away;
    for (auto const& e : M.elements()) rep.image.emplace_back(e.rep % nP, e.rep % nA);

    std::size_t away_units = 0;
    for (std::uint64_t u = 0; u < nA; ++u)
        if (gcd_u64(u, nA) == 1) ++away_units;
    std::set<std::pair<std::uint64_t, std::uint64_t>> distinct(rep.image.begin(), rep.image.end());
    bool valid = true;
    for (auto const& [x, u] : rep.image) valid = valid && gcd_u64(u, nA) == 1;
    rep.bijective = valid && distinct.size() == rep.image.size() && distinct.size() == nP * away_units;

    auto check = [&](std::size_t i, std::size_t j) {
        auto k = M.mul(i, j);
        auto [x1, u1] = rep.image[i];
        auto [x2, u2] = rep.image[j];
        ++rep.pairs_checked;
        return rep.image[k] == std::make_pair(x1 * x2 % nP, u1 * u2 % nA);
    };
    rep.multiplicative = true;
    if (sample_pairs == 0) {
        for (std::size_t i = 0; i < M.size() && rep.multiplicative; ++i)
            for (std::size_t j = 0; j < M.size(); ++j)
                if (!check(i, j)) {
                    rep.multiplicative = false;
                    break;
                }
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t s = 0; s < sample_pairs; ++s)
            if (!check(rng() % M.size(), rng() % M.size())) {
                rep.multiplicative = false;
                break;
            }
    }
    return rep;
}

template <class D>
PushoutReport dr_pushout_check(const D& dom, const typename D::Cycle& f, const typename D::Support& P)
{
    using Elem = typename D::Elem;
    if (!P.chebotarev_dense)
        throw DensityRequired("the pushout description requires a Chebotarev dense prime support");
    DRMonoid<D> M(dom, f, P);
    const auto& Cl = M.part_group(0);  // d = (1): Cl_P(f) = Cl(f)
    if (!Cl.is_full()) throw PreconditionFailed("Cl_P(f) is not all of Cl(f)");

    auto fP = supported_part(dom, f.fin, P);
    auto fA = dom.div(f.fin, fP);
    auto RA = dom.residues(fP);
    Elem e = dom.crt_idempotent(fP, fA);
    Elem one_minus_e = dom.elem_sub(Elem{1}, e);
    auto lift = [&](std::size_t a, bool need_support) {
        Elem base = dom.elem_add(dom.elem_mul(RA.element(a), e), one_minus_e);
        return lift_residue(dom, base, f.fin, P, need_support);
    };

    const std::size_t nA = RA.size(), nC = Cl.order();
    std::vector<std::size_t> unitsA;
    std::vector<std::size_t> phi;  // class of the lift of each unit
    for (std::size_t g = 0; g < nA; ++g)
        if (RA.is_unit(g)) {
            unitsA.push_back(g);
            phi.push_back(Cl.index_of(dom.principal(lift(g, false))));
        }
    std::vector<typename D::Ideal> liftA;
    for (std::size_t a = 0; a < nA; ++a) liftA.push_back(dom.principal(lift(a, true)));

    auto pair_index = [&](std::size_t a, std::size_t c) { return a * nC + c; };
    UnionFind uf(nA * nC);
    for (std::size_t a = 0; a < nA; ++a)
        for (std::size_t c = 0; c < nC; ++c)
            for (std::size_t k = 0; k < unitsA.size(); ++k)
                uf.unite(pair_index(a, c),
                         pair_index(RA.mul(unitsA[k], a), Cl.table()[Cl.inverse(phi[k])][c]));

    auto image = [&](std::size_t a, std::size_t c) {
        return M.classify(dom.mul(liftA[a], Cl.reps()[c]));
    };
    PushoutReport rep;
    rep.dr_size = M.size();
    rep.well_defined = true;
    std::map<std::size_t, std::size_t> orbit_image;
    std::vector<std::pair<std::size_t, std::size_t>> orbit_reps;
    for (std::size_t a = 0; a < nA; ++a)
        for (std::size_t c = 0; c < nC; ++c) {
            auto root = uf.find(pair_index(a, c));
            auto img = image(a, c);
            auto [it, fresh] = orbit_image.emplace(root, img);
            if (fresh)
                orbit_reps.emplace_back(a, c);
            else if (it->second != img)
                rep.well_defined = false;
        }
    rep.pushout_size = orbit_image.size();
    std::set<std::size_t> hit;
    for (auto const& [root, img] : orbit_image) hit.insert(img);
    rep.bijective = hit.size() == orbit_image.size() && hit.size() == M.size();
    rep.multiplicative = true;
    for (auto const& [a, c] : orbit_reps)
        for (auto const& [a2, c2] : orbit_reps)
            if (image(RA.mul(a, a2), Cl.table()[c][c2]) != M.mul(image(a, c), image(a2, c2)))
                rep.multiplicative = false;
    return rep;
}

template <class D>
PushoutReport class_number_one_check(const D& dom, const typename D::Cycle& f)
{
    if (dom.class_number() != 1) throw PreconditionFailed("the field does not have class number one");
    auto P = D::Support::all();
    DRMonoid<D> M(dom, f, P);
    auto R = dom.residues(f.fin);
    auto units = dom.units_of(f);
    UnionFind uf(R.size());
    for (std::size_t r = 0; r < R.size(); ++r)
        for (auto const& u : units) uf.unite(r, R.index(dom.elem_mul(u, R.element(r))));
    std::vector<std::size_t> img(R.size());
    for (std::size_t r = 0; r < R.size(); ++r)
        img[r] = M.classify(dom.principal(lift_residue(dom, R.element(r), f.fin, P, false)));

    PushoutReport rep;
    rep.dr_size = M.size();
    rep.well_defined = true;
    std::map<std::size_t, std::size_t> orbit_image;
    std::vector<std::size_t> orbit_reps;
    for (std::size_t r = 0; r < R.size(); ++r) {
        auto [it, fresh] = orbit_image.emplace(uf.find(r), img[r]);
        if (fresh)
            orbit_reps.push_back(r);
        else if (it->second != img[r])
            rep.well_defined = false;
    }
    rep.pushout_size = orbit_image.size();
    std::set<std::size_t> hit;
    for (auto const& [root, i] : orbit_image) hit.insert(i);
    rep.bijective = hit.size() == orbit_image.size() && hit.size() == M.size();
    rep.multiplicative = true;
    for (auto r : orbit_reps)
        for (auto s : orbit_reps)
            if (img[R.mul(r, s)] != M.mul(img[r], img[s])) rep.multiplicative = false;
    return rep;
}

template <class D>
MonoidMapReport dr_canonical_map(const DRMonoid<D>& big, const DRMonoid<D>& small)
{
    const auto& dom = big.domain();
    if (!cycle_divides(dom, small.cycle(), big.cycle()))
        throw InvalidInput("canonical map: the small cycle does not divide the big one");
    MonoidMapReport rep;
    for (auto const& e : big.elements()) rep.images.push_back(small.classify(e.rep));
    rep.homomorphism = true;
    for (std::size_t i = 0; i < big.size() && rep.homomorphism; ++i)
        for (std::size_t j = 0; j < big.size(); ++j)
            if (rep.images[big.mul(i, j)] != small.mul(rep.images[i], rep.images[j])) {
                rep.homomorphism = false;
                break;
            }
    std::set<std::size_t> hit(rep.images.begin(), rep.images.end());
    rep.surjective = hit.size() == small.size();
    rep.injective = hit.size() == big.size();
    /* the map must agree with classifying honest ideals at both levels */
    rep.consistent = true;
    std::uint64_t bound = std::min<std::uint64_t>(4 * dom.norm(big.cycle().fin) + 16, 400);
    for (std::uint64_t n = 1; n <= bound; ++n)
        for (auto const& a : dom.ideals_of_norm(n)) {
            if (!big.in_support(a)) continue;
            if (rep.images[big.classify(a)] != small.classify(a)) rep.consistent = false;
        }
    return rep;
}

template <class D>
ShiftMapReport dr_shift_map(const DRMonoid<D>& small, const DRMonoid<D>& big, const typename D::Ideal& a)
{
    const auto& dom = small.domain();
    if (!(big.cycle().fin == dom.mul(small.cycle().fin, a)) || big.cycle().inf != small.cycle().inf)
        throw InvalidInput("shift map: the big cycle must be f*a");
    if (!small.in_support(a)) throw InvalidInput("shift map: a is not supported at P");
    ShiftMapReport rep;
    for (auto const& e : small.elements()) rep.images.push_back(big.classify(dom.mul(a, e.rep)));
    std::set<std::size_t> hit(rep.images.begin(), rep.images.end());
    rep.injective = hit.size() == small.size();

    auto proj = dr_canonical_map(big, small).images;
    auto a_small = small.classify(a), a_big = big.classify(a);
    rep.proj_after_shift = true;
    for (std::size_t x = 0; x < small.size(); ++x)
        if (proj[rep.images[x]] != small.mul(a_small, x)) rep.proj_after_shift = false;
    rep.shift_after_proj = true;
    for (std::size_t y = 0; y < big.size(); ++y)
        if (rep.images[proj[y]] != big.mul(a_big, y)) rep.shift_after_proj = false;
    rep.equivariant = true;
    for (std::size_t m = 0; m < big.size(); ++m)
        for (std::size_t x = 0; x < small.size(); ++x)
            if (rep.images[small.mul(proj[m], x)] != big.mul(m, rep.images[x])) rep.equivariant = false;
    return rep;
}

template <class D>
DRSet free_dr_set(const DRMonoid<D>& M)
{
    return {M.size(), M.identity(), M.table()};
}

/* ------------------------------------------------------------------ */

#define LF_INSTANTIATE(D)                                                                           \
    template class RayClassGroup<D>;                                                                \
    template class DRMonoid<D>;                                                                     \
    template class EquivTester<D>;                                                                  \
    template bool in_support<D>(const D&, const D::Ideal&, const D::Support&);                      \
    template bool cycle_divides<D>(const D&, const D::Cycle&, const D::Cycle&);                     \
    template bool f_equiv<D>(const D&, const D::Ideal&, const D::Ideal&, const D::Cycle&,           \
                             const D::Support&);                                                    \
    template bool f_equiv_generator<D>(const D&, const D::Ideal&, const D::Ideal&, const D::Cycle&, \
                                       const D::Support&);                                          \
    template PushoutReport dr_pushout_check<D>(const D&, const D::Cycle&, const D::Support&);       \
    template PushoutReport class_number_one_check<D>(const D&, const D::Cycle&);                    \
    template MonoidMapReport dr_canonical_map<D>(const DRMonoid<D>&, const DRMonoid<D>&);           \
    template ShiftMapReport dr_shift_map<D>(const DRMonoid<D>&, const DRMonoid<D>&, const D::Ideal&); \
    template DRSet free_dr_set<D>(const DRMonoid<D>&);

LF_INSTANTIATE(RationalDomain)
LF_INSTANTIATE(QuadraticDomain)

#undef LF_INSTANTIATE

}  // namespace lf
