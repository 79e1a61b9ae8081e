#include "lambda_forge/model_checker.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "lambda_forge/exact_arith.hpp"

namespace lf {

namespace {

void check_map(const Map& f, std::size_t n, const std::string& what)
{
    if (f.size() != n) throw InvalidInput(what + ": map has " + std::to_string(f.size()) + " entries, expected " + std::to_string(n));
    for (auto x : f)
        if (x >= n) throw InvalidInput(what + ": value " + std::to_string(x) + " out of range");
}

bool is_identity_on(const Map& f, const Subset& T)
{
    return std::all_of(T.begin(), T.end(), [&](std::uint32_t s) { return f[s] == s; });
}

bool agree_on(const Map& f, const Map& g, const Subset& T)
{
    return std::all_of(T.begin(), T.end(), [&](std::uint32_t s) { return f[s] == g[s]; });
}

Map power(const Map& f, std::uint64_t k)
{
    Map r = identity_map(f.size());
    for (std::uint64_t i = 0; i < k; ++i) r = compose(f, r);
    return r;
}

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace

Map identity_map(std::size_t n)
{
    Map r(n);
    std::iota(r.begin(), r.end(), 0u);
    return r;
}

Map compose(const Map& f, const Map& g)
{
    Map r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = f[g[i]];
    return r;
}

Subset apply_map(const Map& f, const Subset& T)
{
    Subset r;
    r.reserve(T.size());
    for (auto s : T) r.push_back(f[s]);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

Subset full_subset(std::size_t n)
{
    Subset r(n);
    std::iota(r.begin(), r.end(), 0u);
    return r;
}

std::vector<std::uint64_t> units_mod(std::uint64_t m)
{
    if (m == 0) throw InvalidInput("modulus must be positive");
    std::vector<std::uint64_t> r;
    for (std::uint64_t u = 0; u < m; ++u)
        if (gcd_u64(u, m) == 1) r.push_back(u);
    return r;
}

/* ---------------------------------------------------------------- */

void FiniteIdSet::validate() const
{
    if (m == 0) throw InvalidInput("modulus must be positive");
    auto U = units_mod(m);
    if (galois.size() != U.size()) throw InvalidInput("galois data must list every unit mod m");
    for (auto u : U) {
        auto it = galois.find(u);
        if (it == galois.end()) throw InvalidInput("galois data missing unit " + std::to_string(u));
        check_map(it->second, size, "galois " + std::to_string(u));
    }
    if (galois.at(1 % m) != identity_map(size)) throw InvalidInput("galois: 1 does not act as the identity");
    for (auto u : U)
        for (auto v : U)
            if (galois.at(mod_mul(u, v, m)) != compose(galois.at(u), galois.at(v)))
                throw InvalidInput("galois data is not a group action (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    for (auto const& [p, f] : special) {
        if (!is_prime_u64(p)) throw InvalidInput("special key " + std::to_string(p) + " is not prime");
        check_map(f, size, "psi_" + std::to_string(p));
    }
    for (auto p : prime_divisors(m))
        if (!special.count(p)) throw InvalidInput("psi_" + std::to_string(p) + " missing for a prime dividing m");
    for (auto const& [p, f] : special) {
        for (auto const& [q, g] : special)
            if (compose(f, g) != compose(g, f))
                throw InvalidInput("psi_" + std::to_string(p) + " and psi_" + std::to_string(q) + " do not commute");
        for (auto const& [u, g] : galois)
            if (compose(f, g) != compose(g, f))
                throw InvalidInput("psi_" + std::to_string(p) + " does not commute with galois " + std::to_string(u));
    }
}

const Map& FiniteIdSet::galois_of(std::uint64_t u) const
{
    auto it = galois.find(u % m);
    if (it == galois.end()) throw InvalidInput(std::to_string(u) + " is not a unit mod " + std::to_string(m));
    return it->second;
}

Map FiniteIdSet::psi(std::uint64_t p) const
{
    auto it = special.find(p);
    if (it != special.end()) return it->second;
    return galois_of(p);
}

Map FiniteIdSet::psi_ideal(std::uint64_t d) const
{
    if (d == 0) throw InvalidInput("ideal must be nonzero");
    Map r = identity_map(size);
    for (auto [p, e] : factor_u64(d)) r = compose(power(psi(p), e), r);
    return r;
}

Subset FiniteIdSet::image(std::uint64_t d) const { return apply_map(psi_ideal(d), full_subset(size)); }

/* ---------------------------------------------------------------- */

std::uint64_t compute_r(const FiniteIdSet& s)
{
    std::uint64_t r = 1;
    for (auto const& [p, f] : s.special) {
        Subset T = full_subset(s.size);
        for (;;) {
            Subset next = apply_map(f, T);
            if (next == T) break;
            T = std::move(next);
            r *= p;
        }
    }
    return r;
}

QCycle conductor(std::uint64_t m, const std::map<std::uint64_t, Map>& galois, const Subset& T)
{
    auto U = units_mod(m);
    for (auto u : U)
        if (apply_map(galois.at(u), T) != T) throw InvalidInput("subset is not stable under the galois action");
    QCycle c{m, false};
    for (auto n : divisors(m)) {
        bool ok = true;
        for (auto u : U)
            if (u % n == 1 % n && !is_identity_on(galois.at(u), T)) {
                ok = false;
                break;
            }
        if (ok) {
            c.fin = n;
            break;
        }
    }
    c.inf = !is_identity_on(galois.at((m - 1) % m), T);
    return c;
}

QCycle conductor(const FiniteIdSet& s, const Subset& T) { return conductor(s.m, s.galois, T); }

QCycle cycle_lcm(const QCycle& a, const QCycle& b) { return {lcm_u64(a.fin, b.fin), a.inf || b.inf}; }

bool cycle_divides(const QCycle& small, const QCycle& big)
{
    return big.fin % small.fin == 0 && (!small.inf || big.inf);
}

QCycle lcm_bound(const FiniteIdSet& s)
{
    QCycle L{1, false};
    for (auto d : divisors(compute_r(s))) {
        auto c = conductor(s, s.image(d));
        L = cycle_lcm(L, {d * c.fin, c.inf});
    }
    return L;
}

/* ---------------------------------------------------------------- */

std::size_t FiniteGroup::inverse(std::size_t a) const
{
    for (std::size_t b = 0; b < order(); ++b)
        if (table[a][b] == 0) return b;
    throw InvalidInput("group element without inverse");
}

void FiniteGroup::validate() const
{
    const std::size_t n = order();
    if (n == 0) throw InvalidInput("group must be nonempty");
    for (auto const& row : table) {
        if (row.size() != n) throw InvalidInput("group table is not square");
        for (auto x : row)
            if (x >= n) throw InvalidInput("group table entry out of range");
    }
    for (std::size_t a = 0; a < n; ++a) {
        if (table[0][a] != a || table[a][0] != a) throw InvalidInput("element 0 is not the identity");
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]]) throw InvalidInput("group table is not associative");
        inverse(a);
    }
}

namespace {

void check_normal_subgroup(const FiniteGroup& G, const std::vector<std::size_t>& I)
{
    std::set<std::size_t> H(I.begin(), I.end());
    if (!H.count(0)) throw InvalidInput("inertia must contain the identity");
    for (auto x : H) {
        if (x >= G.order()) throw InvalidInput("inertia element out of range");
        for (auto y : H)
            if (!H.count(G.mul(x, y))) throw InvalidInput("inertia is not a subgroup");
        for (std::size_t g = 0; g < G.order(); ++g)
            if (!H.count(G.mul(G.mul(g, x), G.inverse(g)))) throw InvalidInput("inertia is not normal");
    }
}

/* coset index of each group element modulo the normal subgroup I */
std::pair<std::vector<std::size_t>, std::size_t> cosets(const FiniteGroup& G, const std::vector<std::size_t>& I)
{
    std::vector<std::size_t> of(G.order(), SIZE_MAX);
    std::size_t count = 0;
    for (std::size_t g = 0; g < G.order(); ++g) {
        if (of[g] != SIZE_MAX) continue;
        for (auto h : I) of[G.mul(g, h)] = count;
        ++count;
    }
    return {of, count};
}

}  // namespace

void LocalIdSet::validate() const
{
    group.validate();
    check_normal_subgroup(group, inertia);
    if (frobenius >= group.order()) throw InvalidInput("frobenius out of range");
    if (action.size() != group.order()) throw InvalidInput("one map per group element required");
    for (auto const& a : action) check_map(a, size, "group action");
    check_map(psi, size, "psi");
    if (action[0] != identity_map(size)) throw InvalidInput("identity does not act trivially");
    for (std::size_t g = 0; g < group.order(); ++g) {
        for (std::size_t h = 0; h < group.order(); ++h)
            if (action[group.mul(g, h)] != compose(action[g], action[h])) throw InvalidInput("not a group action");
        if (compose(psi, action[g]) != compose(action[g], psi)) throw InvalidInput("psi does not commute with the group");
    }
}

UnramifiedCore local_unramified_core(const LocalIdSet& s)
{
    UnramifiedCore out;
    Subset T = full_subset(s.size);
    for (;;) {
        Subset next = apply_map(s.psi, T);
        if (next == T) break;
        T = std::move(next);
    }
    out.core = T;
    out.level_of.assign(s.size, SIZE_MAX);
    for (auto x : T) out.level_of[x] = 0;
    out.levels.push_back(T);
    for (std::size_t i = 1;; ++i) {
        Subset L;
        for (std::uint32_t x = 0; x < s.size; ++x)
            if (out.level_of[x] == SIZE_MAX && out.level_of[s.psi[x]] == i - 1) L.push_back(x);
        if (L.empty()) break;
        for (auto x : L) out.level_of[x] = i;
        out.levels.push_back(std::move(L));
    }
    return out;
}

Map local_retraction(const LocalIdSet& s)
{
    auto U = local_unramified_core(s);
    Map inv(s.size, UINT32_MAX);
    for (auto x : U.core) {
        auto y = s.psi[x];
        if (U.level_of[y] != 0 || inv[y] != UINT32_MAX) throw PreconditionFailed("psi is not a bijection on the unramified core");
        inv[y] = x;
    }
    Map r(s.size);
    for (std::uint32_t x = 0; x < s.size; ++x) {
        std::uint32_t y = x;
        for (std::size_t i = 0; i < U.level_of[x]; ++i) y = s.psi[y];
        for (std::size_t i = 0; i < U.level_of[x]; ++i) y = inv[y];
        r[x] = y;
    }
    return r;
}

bool local_model_exists(const LocalIdSet& s)
{
    auto core = local_unramified_core(s).core;
    for (auto g : s.inertia)
        if (!is_identity_on(s.action[g], core)) return false;
    return agree_on(s.psi, s.action[s.frobenius], core);
}

bool local_factors_through(const LocalIdSet& s, std::size_t n)
{
    const auto& G = s.group;
    auto [coset_of, ncosets] = cosets(G, s.inertia);
    /* (psi^a, F^a mod I) is periodic once a >= |S| */
    std::size_t ordF = 1;
    for (std::size_t x = s.frobenius; coset_of[x] != coset_of[0]; x = G.mul(x, s.frobenius)) ++ordF;
    Map P = power(s.psi, s.size);
    std::size_t per = 1;
    for (Map q = compose(s.psi, P); q != P; q = compose(s.psi, q)) ++per;
    std::size_t top = n + s.size + std::lcm(ordF, per);
    std::vector<std::optional<Map>> seen(ncosets);
    Map psi_a = power(s.psi, n);
    std::size_t F_a = 0;
    for (std::size_t i = 0; i < n; ++i) F_a = G.mul(F_a, s.frobenius);
    for (std::size_t a = n; a <= top; ++a) {
        for (std::size_t g = 0; g < G.order(); ++g) {
            auto c = coset_of[G.mul(g, F_a)];
            Map act = compose(s.action[g], psi_a);
            if (!seen[c]) seen[c] = act;
            else if (*seen[c] != act) return false;
        }
        psi_a = compose(s.psi, psi_a);
        F_a = G.mul(F_a, s.frobenius);
    }
    return true;
}

std::size_t QuotientMonoid::element(std::size_t g, std::size_t a) const
{
    if (a < n) return a * group_order + g;
    throw InvalidInput("use the top component directly for a >= n");
}

QuotientMonoid local_quotient_monoid(const FiniteGroup& G, const std::vector<std::size_t>& inertia,
                                     std::size_t frobenius, std::size_t n)
{
    G.validate();
    check_normal_subgroup(G, inertia);
    if (frobenius >= G.order()) throw InvalidInput("frobenius out of range");
    QuotientMonoid M;
    M.n = n;
    M.group_order = G.order();
    std::tie(M.coset_of, M.coset_count) = cosets(G, inertia);
    for (std::size_t g = 0; g < G.order(); ++g)
        if (M.coset_of[G.mul(frobenius, g)] != M.coset_of[G.mul(g, frobenius)])
            throw InvalidInput("frobenius is not central modulo inertia");
    const std::size_t low = n * G.order();
    const std::size_t size = low + M.coset_count;
    std::vector<std::size_t> coset_rep(M.coset_count);
    for (std::size_t g = G.order(); g-- > 0;) coset_rep[M.coset_of[g]] = g;
    std::vector<std::size_t> F_pow(n + 1, 0);
    for (std::size_t a = 1; a <= n; ++a) F_pow[a] = G.mul(F_pow[a - 1], frobenius);
    /* the class of g F^a in G/I, for every element */
    auto value = [&](std::size_t e) {
        if (e >= low) return coset_rep[e - low];
        return G.mul(e % G.order(), F_pow[e / G.order()]);
    };
    M.table.assign(size, std::vector<std::size_t>(size));
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y) {
            if (x < low && y < low && x / G.order() + y / G.order() < n) {
                M.table[x][y] = (x / G.order() + y / G.order()) * G.order() + G.mul(x % G.order(), y % G.order());
            } else {
                /* F-degree at least n: only the class of g h F^{a+b} survives */
                M.table[x][y] = low + M.coset_of[G.mul(value(x), value(y))];
            }
        }
    return M;
}

/* ---------------------------------------------------------------- */

LocalIdSet localize(const FiniteIdSet& s, std::uint64_t p)
{
    if (!is_prime_u64(p)) throw InvalidInput(std::to_string(p) + " is not prime");
    std::uint64_t pk = pow_u64(p, valuation(s.m, p));
    std::uint64_t mp = s.m / pk;  // prime-to-p part
    /* decomposition group: units whose reduction mod mp is a power of p */
    std::set<std::uint64_t> powers;
    for (std::uint64_t x = 1 % mp; powers.insert(x).second;) x = mod_mul(x, p % mp, mp);
    std::vector<std::uint64_t> D;
    for (auto u : units_mod(s.m))
        if (powers.count(u % mp)) D.push_back(u);
    std::stable_partition(D.begin(), D.end(), [&](std::uint64_t u) { return u == 1 % s.m; });
    std::map<std::uint64_t, std::size_t> idx;
    for (std::size_t i = 0; i < D.size(); ++i) idx[D[i]] = i;

    LocalIdSet L;
    L.size = s.size;
    L.group.table.assign(D.size(), std::vector<std::size_t>(D.size()));
    for (std::size_t i = 0; i < D.size(); ++i)
        for (std::size_t j = 0; j < D.size(); ++j) L.group.table[i][j] = idx.at(mod_mul(D[i], D[j], s.m));
    for (std::size_t i = 0; i < D.size(); ++i) {
        if (D[i] % mp == 1 % mp) L.inertia.push_back(i);
        if (D[i] % mp == p % mp && D[i] % pk == 1 % pk) L.frobenius = i;
        L.action.push_back(s.galois_of(D[i]));
    }
    L.psi = s.psi(p);
    return L;
}

bool model_exists(const FiniteIdSet& s)
{
    for (auto const& [p, f] : s.special)
        if (!local_model_exists(localize(s, p))) return false;
    return true;
}

/* ---------------------------------------------------------------- */

std::optional<std::vector<Map>> factor_through_dr(const FiniteIdSet& s, const DRMonoid<RationalDomain>& M)
{
    const std::uint64_t L = lcm_u64(s.m, M.cycle().fin);
    /* G_Q acts on S and on Cl(f) through (Z/L)*; by Dirichlet these
     * elements are also the Frobenii of all but finitely many primes */
    std::vector<std::pair<std::size_t, Map>> gens;
    for (auto u : units_mod(L)) gens.emplace_back(M.classify(u == 0 ? 1 : u), s.galois_of(u));
    for (auto const& [p, f] : s.special) gens.emplace_back(M.classify(p), f);
    /* primes of f outside B act through Galois but not through (Z/L)* */
    for (auto p : prime_divisors(L))
        if (!s.special.count(p)) gens.emplace_back(M.classify(p), s.galois_of(p));

    std::vector<std::optional<Map>> table(M.size());
    table[M.identity()] = identity_map(s.size);
    std::deque<std::size_t> queue{M.identity()};
    while (!queue.empty()) {
        auto x = queue.front();
        queue.pop_front();
        for (auto const& [y, B] : gens) {
            auto z = M.mul(x, y);
            Map C = compose(B, *table[x]);
            if (!table[z]) {
                table[z] = std::move(C);
                queue.push_back(z);
            } else if (*table[z] != C) {
                return std::nullopt;
            }
        }
    }
    std::vector<Map> out;
    for (auto& t : table) {
        if (!t) throw std::logic_error("DR element not reached by G x Id");
        out.push_back(std::move(*t));
    }
    return out;
}

ModelDecision decide_model_report(const FiniteIdSet& s, const QCycle& f)
{
    if (f.fin == 0) throw InvalidInput("cycle must have a nonzero finite part");
    s.validate();
    ModelDecision d;
    d.local_models = model_exists(s);
    d.bound = lcm_bound(s);
    d.by_lcm = d.local_models && cycle_divides(d.bound, f);
    auto M = dr_monoid(RationalDomain{}, f, RationalDomain::Support::all());
    d.by_factoring = factor_through_dr(s, M).has_value();
    return d;
}

bool decide_model(const FiniteIdSet& s, const QCycle& f)
{
    auto d = decide_model_report(s, f);
    if (d.by_lcm != d.by_factoring)
        throw std::logic_error("lcm criterion and direct factorization disagree for f = " + RationalDomain{}.format(f));
    return d.by_lcm;
}

QCycle minimal_cycle(const FiniteIdSet& s)
{
    s.validate();
    if (!model_exists(s)) throw PreconditionFailed("no integral model exists, so no cycle works");
    auto L = lcm_bound(s);
    RationalDomain Q;
    for (auto n : divisors(L.fin))
        for (bool inf : {false, true}) {
            QCycle c{n, inf};
            if (!cycle_divides(c, L)) continue;
            bool ok = factor_through_dr(s, dr_monoid(Q, c, RationalDomain::Support::all())).has_value();
            if (ok != (c == L)) throw std::logic_error("minimal cycle search disagrees with the lcm at " + Q.format(c));
        }
    return L;
}

DRAction dr_action(const FiniteIdSet& s, const QCycle& f)
{
    if (!decide_model(s, f)) throw PreconditionFailed("the action does not factor through DR(" + RationalDomain{}.format(f) + ")");
    auto M = dr_monoid(RationalDomain{}, f, RationalDomain::Support::all());
    auto t = factor_through_dr(s, M);
    return DRAction{std::move(M), std::move(*t)};
}

/* ---------------------------------------------------------------- */

FiniteIdSet mu_n(std::uint64_t n)
{
    FiniteIdSet s;
    s.size = n;
    s.m = n;
    auto mult = [n](std::uint64_t k) {
        Map f(n);
        for (std::uint64_t x = 0; x < n; ++x) f[x] = static_cast<std::uint32_t>(mod_mul(k, x, n));
        return f;
    };
    for (auto u : units_mod(n)) s.galois[u] = mult(u);
    for (auto p : prime_divisors(n)) s.special[p] = mult(p);
    return s;
}

FiniteIdSet mu_n_mod_sign(std::uint64_t n)
{
    auto full = mu_n(n);
    std::vector<std::uint32_t> cls(n);
    for (std::uint64_t x = 0; x < n; ++x) cls[x] = static_cast<std::uint32_t>(std::min(x, (n - x) % n));
    FiniteIdSet s;
    s.size = n / 2 + 1;
    s.m = n;
    auto descend = [&](const Map& f) {
        Map g(s.size);
        for (std::uint64_t x = 0; x < s.size; ++x) g[x] = cls[f[x]];
        return g;
    };
    for (auto const& [u, f] : full.galois) s.galois[u] = descend(f);
    for (auto const& [p, f] : full.special) s.special[p] = descend(f);
    return s;
}

FiniteIdSet one_point() { return mu_n(1); }

FiniteIdSet free_id_set(const DRMonoid<RationalDomain>& M)
{
    auto D = free_dr_set(M);
    FiniteIdSet s;
    s.size = D.size;
    s.m = M.cycle().fin;
    auto translate = [&](std::size_t x) {
        Map f(D.size);
        for (std::size_t y = 0; y < D.size; ++y) f[y] = static_cast<std::uint32_t>(D.action[x][y]);
        return f;
    };
    for (auto u : units_mod(s.m)) s.galois[u] = translate(M.classify(u == 0 ? 1 : u));
    for (auto p : prime_divisors(s.m)) s.special[p] = translate(M.classify(p));
    return s;
}

FiniteIdSet random_id_set(std::mt19937_64& rng, std::uint64_t max_m, std::size_t max_size)
{
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    FiniteIdSet s;
    s.m = 1 + pick(max_m);
    const auto U = units_mod(s.m);
    auto divs = divisors(s.m);

    struct Block {
        std::uint64_t N;
        bool sign;
        std::size_t offset;
    };
    std::vector<Block> blocks;
    std::size_t used = 0;
    do {
        auto N = divs[pick(divs.size())];
        bool sign = N > 2 && pick(2) == 0;
        std::size_t sz = sign ? N / 2 + 1 : N;
        if (used + sz > max_size) continue;
        blocks.push_back({N, sign, used});
        used += sz;
    } while (used == 0 || (used < max_size && pick(3) != 0));
    s.size = used;

    /* multiplication by k on every block */
    auto mult = [&](const std::vector<std::uint64_t>& k) {
        Map f(s.size);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            auto [N, sign, off] = blocks[b];
            std::size_t sz = sign ? N / 2 + 1 : N;
            for (std::uint64_t x = 0; x < sz; ++x) {
                std::uint64_t y = mod_mul(k[b] % N, x, N);
                if (sign) y = std::min(y, (N - y) % N);
                f[off + x] = static_cast<std::uint32_t>(off + y);
            }
        }
        return f;
    };
    auto same = [&](std::uint64_t k) { return std::vector<std::uint64_t>(blocks.size(), k); };
    for (auto u : U) s.galois[u] = mult(same(u));

    std::set<std::uint64_t> B;
    for (auto p : prime_divisors(s.m)) B.insert(p);
    if (pick(2) == 0) B.insert(std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13}[pick(6)]);
    for (auto p : B) {
        std::vector<std::uint64_t> k = same(p);
        switch (pick(4)) {
        case 0:  // one unit twist everywhere; breaks the model unless it is inertia
        {
            auto t = U[pick(U.size())];
            for (auto& x : k) x = mod_mul(x, t, s.m);
            break;
        }
        case 1:  // independent twists per block
            for (auto& x : k) x = mod_mul(x, U[pick(U.size())], s.m);
            break;
        default:
            break;
        }
        s.special[p] = mult(k);
    }
    return s;
}

}  // namespace lf
