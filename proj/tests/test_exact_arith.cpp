#include "doctest.h"

#include <random>
#include <set>

#include "lambda_forge/error.hpp"
#include "lambda_forge/exact_arith.hpp"

using namespace lf;

namespace {

bool trial_division_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/* Leibniz expansion; only for tiny matrices. */
BigInt det_oracle(const std::vector<std::vector<BigInt>>& m)
{
    const std::size_t n = m.size();
    if (n == 0) return 1;
    if (n == 1) return m[0][0];
    BigInt d = 0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<BigInt>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<BigInt> r;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) r.push_back(m[i][k]);
            minor.push_back(r);
        }
        BigInt t = m[0][j] * det_oracle(minor);
        d += (j % 2 ? -t : t);
    }
    return d;
}

/* Lattice points inside a small box, by breadth-first closure under
 * +-generators inside a much larger box. */
std::set<std::vector<long>> box_points(const IntMatrix& m, long inner, long outer)
{
    std::set<std::vector<long>> seen{std::vector<long>(m.cols(), 0)};
    std::vector<std::vector<long>> queue(seen.begin(), seen.end());
    while (!queue.empty()) {
        auto v = queue.back();
        queue.pop_back();
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (long s : {-1L, 1L}) {
                auto w = v;
                bool ok = true;
                for (std::size_t k = 0; k < m.cols(); ++k) {
                    w[k] += s * m.at(r, k).get_si();
                    ok = ok && std::labs(w[k]) <= outer;
                }
                if (ok && seen.insert(w).second) queue.push_back(w);
            }
    }
    std::set<std::vector<long>> out;
    for (auto const& v : seen) {
        bool in = true;
        for (long x : v) in = in && std::labs(x) <= inner;
        if (in) out.insert(v);
    }
    return out;
}

}  // namespace

TEST_CASE("factor small values")
{
    CHECK(factor(1).factors.empty());
    auto f12 = factor(12);
    REQUIRE(f12.factors.size() == 2);
    CHECK(f12.factors[0] == PrimePower{2, 2});
    CHECK(f12.factors[1] == PrimePower{3, 1});
    CHECK_THROWS_AS(factor(0), InvalidInput);
}

TEST_CASE("2^31-1 is prime")
{
    const std::uint64_t m31 = (1ull << 31) - 1;
    CHECK(trial_division_prime(m31));
    auto f = factor(BigInt(static_cast<unsigned long>(m31)));
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0].prime == BigInt(static_cast<unsigned long>(m31)));
    CHECK(f.factors[0].exponent == 1);
}

TEST_CASE("factor reconstructs random n up to 1e9")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t n = rng() % 1'000'000'000 + 1;
        auto f = factor(BigInt(static_cast<unsigned long>(n)));
        CHECK(f.product() == BigInt(static_cast<unsigned long>(n)));
        for (std::size_t k = 0; k < f.factors.size(); ++k) {
            CHECK(trial_division_prime(f.factors[k].prime.get_ui()));
            if (k) CHECK(f.factors[k - 1].prime < f.factors[k].prime);
        }
        auto g = factor_u64(n);
        REQUIRE(g.size() == f.factors.size());
        for (std::size_t k = 0; k < g.size(); ++k) CHECK(g[k].first == f.factors[k].prime.get_ui());
    }
}

TEST_CASE("factor large semiprime via rho")
{
    BigInt p("1000000007"), q("998244353"), r("4294967311");
    auto f = factor(p * q * r * r);
    REQUIRE(f.factors.size() == 3);
    CHECK(f.factors[0].prime == q);
    CHECK(f.factors[1].prime == p);
    CHECK(f.factors[2].prime == r);
    CHECK(f.factors[2].exponent == 2);
}

TEST_CASE("primality agrees with trial division")
{
    for (std::uint64_t n = 0; n < 20000; ++n) CHECK(is_prime_u64(n) == trial_division_prime(n));
}

TEST_CASE("divisors and valuations")
{
    CHECK(divisors(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
    CHECK(divisors(1) == std::vector<std::uint64_t>{1});
    CHECK(valuation(48, 2) == 4);
    CHECK(prime_divisors(60) == std::vector<std::uint64_t>{2, 3, 5});
    CHECK_THROWS_AS(checked_mul(1ll << 40, 1ll << 40), BoundExceeded);
}

TEST_CASE("hnf examples")
{
    CHECK(hnf(IntMatrix::identity(3)) == IntMatrix::identity(3));
    CHECK(hnf(IntMatrix(2, 3)) == IntMatrix(2, 3));
    auto m = IntMatrix::from_rows_i64({{2, 0}, {1, 1}});
    CHECK(hnf(m) == IntMatrix::from_rows_i64({{1, 1}, {0, 2}}));
}

TEST_CASE("hnf shape, idempotence and lattice equality")
{
    std::mt19937_64 rng(11);
    for (int it = 0; it < 300; ++it) {
        std::size_t r = rng() % 3 + 1, c = rng() % 3 + 1;
        IntMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m.at(i, j) = static_cast<long>(rng() % 9) - 4;
        IntMatrix h = hnf(m);
        CHECK(hnf(h) == h);
        /* pivots positive, increasing, entries above reduced */
        std::size_t last = 0;
        bool first = true, zeros = false;
        for (std::size_t i = 0; i < r; ++i) {
            if (h.is_zero_row(i)) {
                zeros = true;
                continue;
            }
            CHECK_FALSE(zeros);
            std::size_t p = 0;
            while (h.at(i, p) == 0) ++p;
            CHECK(h.at(i, p) > 0);
            if (!first) CHECK(p > last);
            for (std::size_t k = 0; k < i; ++k) {
                CHECK(h.at(k, p) >= 0);
                CHECK(h.at(k, p) < h.at(i, p));
            }
            first = false;
            last = p;
        }
        /* same lattice, compared on a box */
        if (c <= 2) CHECK(box_points(m, 4, 40) == box_points(h, 4, 40));
    }
}

TEST_CASE("lattice index")
{
    CHECK(*lattice_index(IntMatrix::from_rows_i64({{2}}), IntMatrix::from_rows_i64({{1}})) == 2);
    CHECK(*lattice_index(IntMatrix::identity(2), IntMatrix::identity(2)) == 1);
    auto sub = IntMatrix::from_rows_i64({{1, 1}, {-1, 1}});
    CHECK(*lattice_index(sub, IntMatrix::identity(2)) == 2);
    CHECK(det_oracle({{1, 1}, {-1, 1}}) == 2);
    CHECK_FALSE(lattice_index(IntMatrix::from_rows_i64({{1, 0}}), IntMatrix::identity(2)));
    CHECK_THROWS_AS(lattice_index(IntMatrix::identity(2), sub), InvalidInput);
}

TEST_CASE("lattice index matches determinant ratio")
{
    std::mt19937_64 rng(5);
    int done = 0;
    while (done < 200) {
        std::vector<std::vector<BigInt>> a(3, std::vector<BigInt>(3)), u(3, std::vector<BigInt>(3));
        for (auto& row : a)
            for (auto& x : row) x = static_cast<long>(rng() % 7) - 3;
        for (auto& row : u)
            for (auto& x : row) x = static_cast<long>(rng() % 7) - 3;
        BigInt da = det_oracle(a), du = det_oracle(u);
        if (da == 0 || du == 0) continue;
        /* sub = u * a is inside span(a) */
        std::vector<std::vector<BigInt>> s(3, std::vector<BigInt>(3, 0));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) s[i][j] += u[i][k] * a[k][j];
        auto idx = lattice_index(IntMatrix::from_rows(s), IntMatrix::from_rows(a));
        REQUIRE(idx);
        CHECK(*idx == abs(det_oracle(s) / da));
        ++done;
    }
}

TEST_CASE("smith invariants and ranks")
{
    auto m = IntMatrix::from_rows_i64({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
    CHECK(smith_invariants(m) == std::vector<BigInt>{2, 6, 12});
    CHECK(smith_invariants(IntMatrix::from_rows_i64({{4}})) == std::vector<BigInt>{4});
    CHECK(rank_mod_p(IntMatrix::from_rows_i64({{2, 4}, {1, 3}}), 2) == 1);
    CHECK(rank_mod_p(IntMatrix::from_rows_i64({{2, 4}, {1, 3}}), 3) == 2);
    CHECK(rational_rank({{1, 2}, {2, 4}}) == 1);
}

TEST_CASE("smith product equals determinant")
{
    std::mt19937_64 rng(3);
    for (int it = 0; it < 200; ++it) {
        std::vector<std::vector<BigInt>> a(3, std::vector<BigInt>(3));
        for (auto& row : a)
            for (auto& x : row) x = static_cast<long>(rng() % 11) - 5;
        BigInt d = det_oracle(a);
        auto inv = smith_invariants(IntMatrix::from_rows(a));
        if (d == 0) {
            CHECK(inv.size() < 3);
            continue;
        }
        REQUIRE(inv.size() == 3);
        CHECK(inv[0] * inv[1] * inv[2] == abs(d));
        CHECK(inv[1] % inv[0] == 0);
        CHECK(inv[2] % inv[1] == 0);
    }
}
