#include "lambda_forge/lambda_poly.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

#include "lambda_forge/error.hpp"

namespace lf {

Family parse_family(const std::string& s)
{
    if (s == "toric") return Family::toric;
    if (s == "chebyshev") return Family::chebyshev;
    throw InvalidInput("unknown family '" + s + "' (expected toric or chebyshev)");
}

std::string family_name(Family f) { return f == Family::toric ? "toric" : "chebyshev"; }

/* psi_n = sum_k (-1)^k n/(n-k) C(n-k, k) y^{n-2k} */
IntPoly chebyshev_psi(std::uint64_t n)
{
    if (n == 0) return IntPoly::constant(2);
    std::vector<BigInt> c(n + 1);
    for (std::uint64_t k = 0; 2 * k <= n; ++k) {
        BigInt b;
        mpz_bin_uiui(b.get_mpz_t(), n - k, k);
        BigInt t = b * n / (n - k);
        c[n - 2 * k] = k % 2 ? BigInt(-t) : t;
    }
    return IntPoly(std::move(c));
}

LaurentPoly toric_psi(std::int64_t a, const LaurentPoly& p)
{
    if (a <= 0) throw InvalidInput("toric psi_a needs a positive integer a");
    return p.substitute_power(a);
}

bool frobenius_lift_check(Family family, std::uint64_t p)
{
    if (!is_prime_u64(p)) throw InvalidInput(std::to_string(p) + " is not prime");
    BigInt P(static_cast<unsigned long>(p));
    if (family == Family::chebyshev) {
        auto d = chebyshev_psi(p) - IntPoly::monomial(p);
        return d.reduce_mod(P).is_zero();
    }
    for (std::int64_t e : {1, -1}) {
        auto t = LaurentPoly::monomial(e);
        auto d = toric_psi(static_cast<std::int64_t>(p), t) - t.substitute_power(static_cast<std::int64_t>(p));
        for (auto const& c : d.coeffs())
            if (c % P != 0) return false;
    }
    return true;
}

/* ---------------------------------------------------------------- */

std::uint64_t gm_exponent_scan(const RationalDomain::Cycle& f, const RationalDomain::Support& P,
                               std::uint64_t bound)
{
    RationalDomain Q;
    DRMonoid<RationalDomain> M(Q, f, P);
    /* f-equivalent means equal class in DR_P(f) */
    std::map<std::size_t, std::uint64_t> first;
    std::uint64_t g = 0;
    for (std::uint64_t a = 1; a <= bound; ++a) {
        if (!in_support(Q, a, P)) continue;
        auto [it, fresh] = first.emplace(M.classify(a), a);
        if (!fresh) g = std::gcd(g, a - it->second);
    }
    if (g == 0) throw PreconditionFailed("no two distinct f-equivalent exponents below the scan bound");
    return g;
}

std::uint64_t gm_periodic_exponent(const RationalDomain::Cycle& f, const RationalDomain::Support& P)
{
    const std::uint64_t n = f.fin;
    auto m4 = gm_exponent_scan(f, P, 4 * n);
    auto m8 = gm_exponent_scan(f, P, 8 * n);
    if (m4 != m8) throw std::logic_error("periodic exponent scan did not stabilize");
    return m4;
}

IntPoly chebyshev_periodic_generator(std::uint64_t n)
{
    if (n == 0) throw InvalidInput("n must be positive");
    auto Q = squarefree_part(chebyshev_psi(n) - IntPoly::constant(2));
    if (!is_squarefree(Q)) throw std::logic_error("squarefree part is not squarefree");
    return Q;
}

std::pair<IntPoly, IntPoly> binomial_bezout(std::uint64_t a, std::uint64_t b)
{
    if (a == 0 || b == 0) throw InvalidInput("exponents must be positive");
    if (a < b) {
        auto [u, v] = binomial_bezout(b, a);
        return {v, u};
    }
    const std::uint64_t q = a / b, r = a % b;
    if (r == 0) return {IntPoly(), IntPoly::constant(1)};
    /* x^a - 1 = S (x^b - 1) + (x^r - 1), S = sum_{j=1..q} x^{a - jb} */
    IntPoly S;
    for (std::uint64_t j = 1; j <= q; ++j) S = S + IntPoly::monomial(a - j * b);
    auto [u1, v1] = binomial_bezout(b, r);  // u1 (x^b - 1) + v1 (x^r - 1) = g
    return {v1, u1 - v1 * S};
}

EqualizerReport chebyshev_equalizer_report(std::uint64_t n, std::uint64_t bound)
{
    if (n == 0) throw InvalidInput("n must be positive");
    if (bound < 2 * n + 2) throw InvalidInput("bound must be at least 2n + 2");
    EqualizerReport rep;
    rep.n = n;
    rep.bound = bound;
    auto Q = chebyshev_periodic_generator(n);

    /* Q is monic, so Q | psi_a - psi_b iff the remainders agree */
    std::vector<IntPoly> rem(bound + 1);
    for (std::uint64_t a = 1; a <= bound; ++a) rem[a] = divmod_monic(chebyshev_psi(a), Q).second;
    rep.q_divides_all = true;
    for (std::uint64_t a = 1; a <= bound; ++a)
        for (std::uint64_t b = 1; b <= bound; ++b)
            if ((a + b) % n == 0 || (a + n - b % n) % n == 0) {
                ++rep.pairs_checked;
                rep.q_divides_all = rep.q_divides_all && rem[a] == rem[b];
            }

    /* in Z[x^{+-1}]: Q(x + 1/x) is (x^n - 1)(x^g - 1) up to a unit */
    const std::uint64_t g = std::gcd<std::uint64_t>(2, n);
    const auto N = static_cast<std::int64_t>(n);
    auto binom = [](std::uint64_t k) { return LaurentPoly::monomial(static_cast<std::int64_t>(k)) - LaurentPoly::monomial(0); };
    auto target = binom(n) * binom(g);
    auto Qx = substitute_x_plus_inverse(Q);
    rep.generator_identity = Qx.associate(target);

    /* P_{a,b}(x + 1/x) = x^-a (x^{a+b} - 1)(x^{a-b} - 1) */
    auto P = [&](std::uint64_t a, std::uint64_t b) {
        return substitute_x_plus_inverse(chebyshev_psi(a) - chebyshev_psi(b));
    };
    auto P1 = P(n + 1, 1), P2 = P(n + 2, 2);
    bool shapes = P1 == LaurentPoly::monomial(-N - 1) * binom(n + 2) * binom(n) &&
                  P2 == LaurentPoly::monomial(-N - 2) * binom(n + 4) * binom(n);
    auto [u, v] = binomial_bezout(n + 2, n + 4);
    auto combo = LaurentPoly::from_poly(u) * LaurentPoly::monomial(N + 1) * P1 +
                 LaurentPoly::from_poly(v) * LaurentPoly::monomial(N + 2) * P2;
    rep.certificate = shapes && combo == target;
    return rep;
}

bool chebyshev_equalizer_check(std::uint64_t n, std::uint64_t bound) { return chebyshev_equalizer_report(n, bound).ok(); }

/* ---------------------------------------------------------------- */

namespace {

std::vector<BigInt> unit_vector(std::size_t n, std::size_t i, const BigInt& c = 1)
{
    std::vector<BigInt> v(n);
    v[i] = c;
    return v;
}

}  // namespace

IntMatrix sigma_invariant_lattice(std::uint64_t n)
{
    if (n == 0) throw InvalidInput("n must be positive");
    std::vector<std::vector<BigInt>> rows{unit_vector(n, 0)};
    for (std::uint64_t i = 1; 2 * i < n; ++i) {
        auto v = unit_vector(n, i);
        v[n - i] = 1;
        rows.push_back(v);
    }
    if (n % 2 == 0 && n > 0 && n / 2 != 0) rows.push_back(unit_vector(n, n / 2));
    return lattice_basis(IntMatrix::from_rows(rows, n));
}

IntMatrix stated_image_basis(std::uint64_t n)
{
    if (n == 0) throw InvalidInput("n must be positive");
    std::vector<std::vector<BigInt>> rows{unit_vector(n, 0)};
    for (std::uint64_t i = 1; 2 * i < n; ++i) {
        auto v = unit_vector(n, i);
        v[n - i] = 1;
        rows.push_back(v);
    }
    if (n % 2 == 0) rows.push_back(unit_vector(n, n / 2, 2));
    return lattice_basis(IntMatrix::from_rows(rows, n));
}

PeriodicLocusReport chebyshev_image_lattice(std::uint64_t n)
{
    PeriodicLocusReport rep;
    rep.family = Family::chebyshev;
    rep.cycle = {n, false};
    auto Q = chebyshev_periodic_generator(n);
    rep.Q = Q;
    auto y = GroupRingElt::monomial(n, 1) + GroupRingElt::monomial(n, -1);
    if (!evaluate(Q, y).is_zero()) throw std::logic_error("Q(x + 1/x) is not zero in Z[x]/(x^n - 1)");
    std::vector<std::vector<BigInt>> rows;
    auto p = GroupRingElt::monomial(n, 0);
    for (int k = 0; k < Q.degree(); ++k) {
        rows.push_back(p.c);
        p = p * y;
    }
    IntMatrix images = IntMatrix::from_rows(rows, n);
    rep.image_basis = lattice_basis(images);
    rep.injective = rep.image_basis.rows() == static_cast<std::size_t>(Q.degree());
    for (std::size_t r = 0; r < rep.image_basis.rows(); ++r) {
        GroupRingElt e{n, rep.image_basis.row_vector(r)};
        if (!(e.sigma() == e)) throw std::logic_error("image lattice is not sigma-invariant");
    }
    rep.matches_stated_basis = lattice_equal(rep.image_basis, stated_image_basis(n));
    auto idx = lattice_index(rep.image_basis, sigma_invariant_lattice(n));
    if (!idx) throw std::logic_error("image has smaller rank than the invariants");
    rep.cokernel_order = *idx;
    return rep;
}

PeriodicLocusReport toric_periodic_locus(const RationalDomain::Cycle& f)
{
    PeriodicLocusReport rep;
    rep.family = Family::toric;
    rep.cycle = f;
    auto m = gm_periodic_exponent(f);
    rep.exponent = m;
    /* O(mu_m) = Z[x]/(x^m - 1) */
    rep.image_basis = IntMatrix::identity(m);
    rep.injective = true;
    rep.matches_stated_basis = true;
    return rep;
}

bool torsion_locus_contains_periodic(Family family, const RationalDomain::Cycle& f, std::uint64_t bound)
{
    const std::uint64_t n = f.fin;
    if (n == 0) throw InvalidInput("cycle must have a nonzero finite part");
    if (family == Family::chebyshev) {
        if (f.inf) throw InvalidInput("the Chebyshev line is treated for cycles (n) without the real place");
        auto Qn = chebyshev_periodic_generator(n);
        if (!divides_monic(Qn, chebyshev_psi(n) - IntPoly::constant(2))) return false;
        for (std::uint64_t a = 1; a <= bound; ++a)
            if (!divides_monic(chebyshev_periodic_generator(a * n), compose(Qn, chebyshev_psi(a)))) return false;
        return true;
    }
    /* toric: X(f) = mu_m, X[f] = psi_n^{-1}(X(f_inf)) = mu_n */
    auto binom = [](std::uint64_t k) { return IntPoly::monomial(k) - IntPoly::constant(1); };
    auto m = gm_periodic_exponent(f);
    if (!divides_monic(binom(m), binom(n))) return false;
    for (std::uint64_t a = 1; a <= bound; ++a) {
        auto maf = gm_periodic_exponent({a * n, f.inf});
        if (!divides_monic(binom(maf), binom(a * m))) return false;
    }
    return true;
}

/* ---------------------------------------------------------------- */

AlgebraMaps ray_class_algebra_maps(std::uint64_t n, std::uint64_t n2)
{
    if (n == 0 || n2 == 0 || n2 % n != 0) throw InvalidInput("need n | n'");
    const std::uint64_t k = n2 / n;
    AlgebraMaps r;
    r.n = n;
    r.n2 = n2;
    for (std::uint64_t i = 0; i < n; ++i) r.u.push_back(i * k % n2);
    for (std::uint64_t j = 0; j < n2; ++j) r.v.push_back(j % n);
    r.homomorphisms = true;
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < n; ++j) r.homomorphisms = r.homomorphisms && r.u[(i + j) % n] == (r.u[i] + r.u[j]) % n2;
    for (std::uint64_t i = 0; i < n2; ++i)
        for (std::uint64_t j = 0; j < n2; ++j) r.homomorphisms = r.homomorphisms && r.v[(i + j) % n2] == (r.v[i] + r.v[j]) % n;
    r.v_after_u_is_psi = true;
    for (std::uint64_t i = 0; i < n; ++i) r.v_after_u_is_psi = r.v_after_u_is_psi && r.v[r.u[i]] == i * k % n;
    r.u_after_v_is_psi = true;
    for (std::uint64_t j = 0; j < n2; ++j) r.u_after_v_is_psi = r.u_after_v_is_psi && r.u[r.v[j]] == j * k % n2;
    std::vector<std::vector<BigInt>> rows;
    for (std::uint64_t i = 0; i < n; ++i) rows.push_back(unit_vector(n2, r.u[i]));
    r.u_injective = lattice_rank(IntMatrix::from_rows(rows, n2)) == n;
    return r;
}

CotangentReport cyclotomic_cotangent(std::uint64_t a)
{
    if (a == 0) throw InvalidInput("a must be positive");
    CotangentReport rep;
    rep.a = a;
    if (a == 1) return rep;
    /* I has basis x^i - 1 (i = 1..a-1); an element of I with coefficient
     * vector c has coordinates c_1..c_{a-1} in that basis */
    std::vector<GroupRingElt> gens;
    for (std::uint64_t i = 1; i < a; ++i)
        gens.push_back(GroupRingElt::monomial(a, static_cast<std::int64_t>(i)) - GroupRingElt::monomial(a, 0));
    std::vector<std::vector<BigInt>> rows;
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i; j < gens.size(); ++j) {
            auto p = gens[i] * gens[j];
            rows.emplace_back(p.c.begin() + 1, p.c.end());
        }
    auto inv = smith_invariants(IntMatrix::from_rows(rows, a - 1));
    rep.free_rank = (a - 1) - inv.size();
    for (auto const& d : inv)
        if (d != 1) rep.torsion.push_back(d);
    return rep;
}

std::size_t cyclotomic_cotangent_dim(std::uint64_t a, std::uint64_t q)
{
    if (!is_prime_u64(q)) throw InvalidInput(std::to_string(q) + " is not prime");
    auto rep = cyclotomic_cotangent(a);
    std::size_t dim = rep.free_rank;
    for (auto const& d : rep.torsion)
        if (d % static_cast<unsigned long>(q) == 0) ++dim;
    return dim;
}

}  // namespace lf
