#include "doctest.h"

#include <numeric>
#include <set>

#include "lambda_forge/exact_arith.hpp"
#include "lambda_forge/ray_class.hpp"

using namespace lf;

namespace {

using QCycle = RationalDomain::Cycle;
using QSupport = RationalDomain::Support;
using KCycle = QuadraticDomain::Cycle;
using KSupport = QuadraticDomain::Support;

std::uint64_t phi_oracle(std::uint64_t n)
{
    std::uint64_t c = 0;
    for (std::uint64_t k = 0; k < n; ++k)
        if (std::gcd(k, n) == 1) ++c;
    return c;
}

/* |Cl(m)| over Q: (Z/m)* with or without identifying +-1 */
std::uint64_t ray_order_Q(std::uint64_t m, bool inf)
{
    std::uint64_t p = phi_oracle(m);
    return (inf || m <= 2) ? p : p / 2;
}

/* |Cl(m)| = h |(O/m)*| / |image of units| for imaginary quadratic K */
std::uint64_t ray_order_K(const QuadraticDomain& D, const QuadIdeal& m)
{
    const auto& K = D.field();
    std::uint64_t units_mod = 0;
    /* (O/m)* by brute force over a full residue system */
    std::int64_t A = m.c * m.a, C = m.c;
    for (std::int64_t y = 0; y < C; ++y)
        for (std::int64_t x = 0; x < A; ++x)
            if (K.ideal_gcd(m, x == 0 && y == 0 ? m : K.principal({x, y})) == K.one() ||
                (m == K.one()))
                ++units_mod;
    std::uint64_t trivial = 0;
    auto U = K.unit_group();
    for (auto const& u : U)
        if (K.contains(m, K.sub(u, {1, 0}))) ++trivial;
    return D.class_number() * units_mod * trivial / U.size();
}

std::vector<QuadIdeal> ideals_up_to(const QuadField& K, std::int64_t bound)
{
    std::vector<QuadIdeal> out;
    for (std::int64_t n = 1; n <= bound; ++n)
        for (auto const& I : K.ideals_of_norm(n)) out.push_back(I);
    return out;
}

template <class D>
void check_monoid_axioms(const DRMonoid<D>& M)
{
    const auto& t = M.table();
    const std::size_t n = M.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(t[M.identity()][i] == i);
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(t[i][j] == t[j][i]);
            /* the law agrees with multiplying representatives */
            CHECK(t[i][j] == M.classify(M.domain().mul(M.elements()[i].rep, M.elements()[j].rep)));
            for (std::size_t k = 0; k < n; ++k) CHECK(t[t[i][j]][k] == t[i][t[j][k]]);
        }
    }
    /* the units are exactly the part d = (1), and they form a group */
    auto units = M.units();
    std::set<std::size_t> U(units.begin(), units.end());
    for (std::size_t i = 0; i < n; ++i) {
        bool invertible = false;
        for (std::size_t j = 0; j < n; ++j) invertible = invertible || t[i][j] == M.identity();
        CHECK(invertible == (U.count(i) == 1));
    }
    CHECK(units.size() == M.part_group(0).order());
}

}  // namespace

TEST_CASE("cycle parsing")
{
    RationalDomain Q;
    CHECK(Q.parse_cycle("12*inf") == QCycle{12, true});
    CHECK(Q.parse_cycle("12") == QCycle{12, false});
    CHECK(Q.format(Q.parse_cycle(" 7 * inf ")) == "7*inf");
    CHECK_THROWS_AS(Q.parse_cycle("0"), InvalidInput);
    CHECK_THROWS_AS(Q.parse_cycle("x"), InvalidInput);
    QuadraticDomain Ki(QuadField(-1));
    CHECK(Ki.parse_cycle("[5,2+w,1]").fin.norm() == 5);
    CHECK_THROWS_AS(Ki.parse_cycle("[5,2+w,1]*inf"), InvalidInput);
}

TEST_CASE("f-equivalence examples over Q")
{
    RationalDomain Q;
    auto all = QSupport::all();
    CHECK(f_equiv(Q, 2, 6, QCycle{4, true}, all));
    CHECK_FALSE(f_equiv(Q, 2, 3, QCycle{5, true}, all));
    CHECK(f_equiv(Q, 7, 7, QCycle{5, true}, all));
    CHECK(f_equiv_generator(Q, 2, 6, QCycle{4, true}, all));
    CHECK_FALSE(f_equiv_generator(Q, 1, 2, QCycle{2, true}, all));
    CHECK(f_equiv_generator(Q, 9, 9, QCycle{2, true}, all));
    /* without the real place, -1 is allowed */
    CHECK(f_equiv(Q, 1, 4, QCycle{5, false}, all));
    CHECK_FALSE(f_equiv(Q, 1, 4, QCycle{5, true}, all));
    /* ideals outside P are rejected */
    CHECK_THROWS_AS(f_equiv(Q, 2, 4, QCycle{5, true}, QSupport::all_except({2})), InvalidInput);
}

TEST_CASE("f-equivalence is an equivalence, multiplicative, and refines")
{
    RationalDomain Q;
    auto all = QSupport::all();
    for (std::uint64_t n : {1, 2, 4, 6, 9, 12}) {
        for (bool inf : {false, true}) {
            QCycle f{n, inf};
            EquivTester<RationalDomain> eq(Q, f, all);
            for (std::uint64_t a = 1; a <= 30; ++a)
                for (std::uint64_t b = 1; b <= 30; ++b) {
                    bool ab = eq(a, b);
                    CHECK(ab == eq(b, a));
                    CHECK(ab == f_equiv(Q, a, b, f, all));
                    if (ab)
                        for (std::uint64_t c = 1; c <= 6; ++c) CHECK(eq(a * c, b * c));
                    for (std::uint64_t c = 1; c <= 30 && ab; ++c)
                        if (eq(b, c)) CHECK(eq(a, c));
                    /* refinement to every divisor cycle */
                    if (ab)
                        for (auto d : divisors(n)) {
                            CHECK(f_equiv(Q, a, b, QCycle{d, inf}, all));
                            CHECK(f_equiv(Q, a, b, QCycle{d, false}, all));
                        }
                }
        }
    }
}

TEST_CASE("f-equivalence over Q(i): relation axioms and generator criterion")
{
    QuadraticDomain D(QuadField(-1));
    const auto& K = D.field();
    auto all = KSupport::all();
    auto ideals = ideals_up_to(K, 20);
    for (auto const& f : ideals_up_to(K, 10)) {
        KCycle c{f, false};
        EquivTester<QuadraticDomain> eq(D, c, all);
        for (auto const& a : ideals)
            for (auto const& b : ideals) {
                bool ab = eq(a, b);
                CHECK(ab == f_equiv_generator(D, a, b, c, all));
                CHECK(ab == eq(b, a));
                if (ab) CHECK(eq(K.ideal_mul(a, K.principal({1, 1})), K.ideal_mul(b, K.principal({1, 1}))));
            }
    }
}

TEST_CASE("ray class groups over Q")
{
    RationalDomain Q;
    auto all = QSupport::all();
    CHECK(ray_class_group(Q, QCycle{1, false}, all).order() == 1);
    CHECK(ray_class_group(Q, QCycle{12, true}, all).order() == 4);
    for (std::uint64_t n = 1; n <= 60; ++n)
        for (bool inf : {false, true}) {
            auto G = ray_class_group(Q, QCycle{n, inf}, all);
            CHECK(G.order() == ray_order_Q(n, inf));
            CHECK(G.is_full());
            for (auto r : G.reps()) CHECK(std::gcd(r, n) == 1);
        }
}

TEST_CASE("ray class group with an explicit support is the subgroup generated by it")
{
    RationalDomain Q;
    /* only the prime 2: its powers mod 7 are {1, 2, 4} */
    auto G = ray_class_group(Q, QCycle{7, true}, QSupport::explicit_list({2}));
    CHECK(G.order() == 3);
    CHECK_FALSE(G.is_full());
    CHECK_THROWS_AS(dr_pushout_check(Q, QCycle{7, true}, QSupport::explicit_list({2})), DensityRequired);
}

TEST_CASE("ray class groups over imaginary quadratic fields")
{
    QuadraticDomain Di(QuadField(-1));
    auto all = KSupport::all();
    auto f = Di.field().principal({2, 1});
    CHECK(ray_class_group(Di, KCycle{f, false}, all).order() == 1);
    for (std::int64_t d : {-1, -3, -5, -23}) {
        QuadraticDomain D{QuadField(d)};
        for (auto const& m : ideals_up_to(D.field(), 30)) {
            auto G = ray_class_group(D, KCycle{m, false}, all);
            CAPTURE(d);
            CAPTURE(QuadField::format(m));
            CHECK(G.order() == ray_order_K(D, m));
            const auto& t = G.table();
            for (std::size_t i = 0; i < G.order(); ++i) {
                CHECK(t[0][i] == i);
                CHECK(t[i][G.inverse(i)] == 0);
            }
        }
    }
}

TEST_CASE("DR monoid examples over Q")
{
    RationalDomain Q;
    auto all = QSupport::all();
    auto M6 = dr_monoid(Q, QCycle{6, true}, all);
    CHECK(M6.size() == 6);
    auto M4 = dr_monoid(Q, QCycle{4, true}, all);
    auto two = M4.classify(2);
    CHECK(M4.mul(two, two) == M4.classify(4));
    CHECK(M4.classify(4) == M4.classify(8));
    CHECK(dr_monoid(Q, QCycle{1, false}, all).size() == 1);
    CHECK(dr_monoid(Q, QCycle{1, true}, all).size() == 1);
    check_monoid_axioms(M6);
    check_monoid_axioms(dr_monoid(Q, QCycle{12, false}, all));
    check_monoid_axioms(dr_monoid(Q, QCycle{12, true}, QSupport::all_except({2})));
    check_monoid_axioms(dr_monoid(Q, QCycle{9, true}, QSupport::explicit_list({3, 2})));
}

TEST_CASE("DR decomposition count over Q")
{
    RationalDomain Q;
    for (std::uint64_t n = 1; n <= 80; ++n)
        for (bool inf : {false, true})
            for (auto P : {QSupport::all(), QSupport::all_except({2})}) {
                std::uint64_t expect = 0;
                for (auto d : divisors(n))
                    if (P.mode == SupportMode::all || d % 2 == 1) expect += ray_order_Q(n / d, inf);
                CHECK(dr_monoid(Q, QCycle{n, inf}, P).size() == expect);
            }
}

TEST_CASE("DR monoid over imaginary quadratic fields")
{
    for (std::int64_t d : {-1, -5}) {
        QuadraticDomain D{QuadField(d)};
        for (auto const& m : ideals_up_to(D.field(), 10)) {
            auto M = dr_monoid(D, KCycle{m, false}, KSupport::all());
            std::uint64_t expect = 0;
            for (auto const& dv : D.divisors(m)) expect += ray_order_K(D, D.div(m, dv));
            CHECK(M.size() == expect);
            check_monoid_axioms(M);
        }
    }
}

TEST_CASE("residue isomorphism over Q")
{
    auto r6 = dr_iso_residue(QCycle{6, true}, QSupport::all());
    CHECK(r6.ok());
    CHECK(r6.image.size() == 6);
    auto r12 = dr_iso_residue(QCycle{12, true}, QSupport::all_except({2}));
    CHECK(r12.ok());
    CHECK(r12.n_supported == 3);
    CHECK(r12.n_away == 4);
    CHECK(r12.image.size() == 6);
    CHECK(dr_iso_residue(QCycle{1, true}, QSupport::all()).image.size() == 1);
    CHECK_THROWS_AS(dr_iso_residue(QCycle{6, false}, QSupport::all()), PreconditionFailed);
    for (std::uint64_t n = 1; n <= 40; ++n) CHECK(dr_iso_residue(QCycle{n, true}, QSupport::all()).ok());
}

TEST_CASE("pushout description")
{
    RationalDomain Q;
    auto r = dr_pushout_check(Q, QCycle{6, true}, QSupport::all());
    CHECK(r.ok());
    CHECK(r.pushout_size == 6);
    CHECK(dr_pushout_check(Q, QCycle{1, false}, QSupport::all()).ok());
    CHECK(dr_pushout_check(Q, QCycle{12, false}, QSupport::all_except({3})).ok());
    QuadraticDomain Di(QuadField(-1));
    auto ri = dr_pushout_check(Di, KCycle{Di.field().principal({2, 1}), false}, KSupport::all());
    CHECK(ri.ok());
    CHECK(ri.dr_size == 2);
    CHECK(ri.pushout_size == 2);
    QuadraticDomain D5(QuadField(-5));
    for (auto const& m : ideals_up_to(D5.field(), 12)) CHECK(dr_pushout_check(D5, KCycle{m, false}, KSupport::all()).ok());
}

TEST_CASE("class number one description")
{
    RationalDomain Q;
    for (std::uint64_t n = 1; n <= 30; ++n)
        for (bool inf : {false, true}) CHECK(class_number_one_check(Q, QCycle{n, inf}).ok());
    QuadraticDomain Di(QuadField(-1)), D3(QuadField(-3)), D5(QuadField(-5));
    for (auto const& m : ideals_up_to(Di.field(), 20)) CHECK(class_number_one_check(Di, KCycle{m, false}).ok());
    for (auto const& m : ideals_up_to(D3.field(), 20)) CHECK(class_number_one_check(D3, KCycle{m, false}).ok());
    CHECK_THROWS_AS(class_number_one_check(D5, KCycle{D5.field().one(), false}), PreconditionFailed);
}

TEST_CASE("canonical and shift maps")
{
    RationalDomain Q;
    auto all = QSupport::all();
    auto M4 = dr_monoid(Q, QCycle{4, true}, all);
    auto M2 = dr_monoid(Q, QCycle{2, true}, all);
    auto c42 = dr_canonical_map(M4, M2);
    CHECK(c42.ok());
    for (std::size_t i = 0; i < M4.size(); ++i)
        CHECK(M2.elements()[c42.images[i]].rep % 2 == M4.elements()[i].rep % 2);
    auto id = dr_canonical_map(M4, M4);
    CHECK(id.ok());
    CHECK(id.injective);
    for (std::size_t i = 0; i < M4.size(); ++i) CHECK(id.images[i] == i);
    auto M6 = dr_monoid(Q, QCycle{6, true}, all);
    auto M3 = dr_monoid(Q, QCycle{3, true}, all);
    auto c63 = dr_canonical_map(M6, M3);
    CHECK(c63.ok());
    CHECK(c63.images[M6.classify(2)] == M3.classify(2));
    CHECK(M3.units().size() == 2);
    CHECK_THROWS_AS(dr_canonical_map(M4, M3), InvalidInput);

    auto s = dr_shift_map(M2, M4, std::uint64_t{2});
    CHECK(s.ok());
    std::set<std::uint64_t> image_reps;
    for (auto i : s.images) image_reps.insert(M4.elements()[i].rep % 4);
    CHECK(image_reps == std::set<std::uint64_t>{0, 2});
    auto s1 = dr_shift_map(M4, M4, std::uint64_t{1});
    CHECK(s1.ok());
    for (std::size_t i = 0; i < M4.size(); ++i) CHECK(s1.images[i] == i);

    for (std::uint64_t n : {2, 3, 6}) {
        for (std::uint64_t a : {2, 3, 5}) {
            auto small = dr_monoid(Q, QCycle{n, false}, all);
            auto big = dr_monoid(Q, QCycle{n * a, false}, all);
            CHECK(dr_canonical_map(big, small).ok());
            CHECK(dr_shift_map(small, big, a).ok());
        }
    }
    QuadraticDomain Di(QuadField(-1));
    auto p = Di.field().principal({1, 1});
    auto K2 = dr_monoid(Di, KCycle{p, false}, KSupport::all());
    auto K4 = dr_monoid(Di, KCycle{Di.mul(p, Di.field().principal({2, 1})), false}, KSupport::all());
    CHECK(dr_canonical_map(K4, K2).ok());
    CHECK(dr_shift_map(K2, K4, Di.field().principal({2, 1})).ok());
}

TEST_CASE("free DR-set")
{
    RationalDomain Q;
    auto one = free_dr_set(dr_monoid(Q, QCycle{1, false}, QSupport::all()));
    CHECK(one.size == 1);
    auto S = free_dr_set(dr_monoid(Q, QCycle{2, true}, QSupport::all()));
    CHECK(S.size == 2);
    std::set<std::size_t> orbit;
    for (std::size_t m = 0; m < S.size; ++m) orbit.insert(S.action[m][S.point]);
    CHECK(orbit.size() == S.size);
}

TEST_CASE("bounds are enforced")
{
    RationalDomain Q;
    Bounds b;
    b.monoid_size = 50;
    CHECK_THROWS_AS(DRMonoid<RationalDomain>(Q, QCycle{100, true}, QSupport::all(), b), BoundExceeded);
}
