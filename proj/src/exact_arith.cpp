#include "lambda_forge/exact_arith.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

#include "lambda_forge/error.hpp"

namespace lf {

Bounds Bounds::from_env()
{
    Bounds b;
    if (const char* env = std::getenv("LAMBDA_FORGE_BOUND")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0)
            throw InvalidInput("LAMBDA_FORGE_BOUND must be a positive integer");
        b.residue_norm = v;
        b.monoid_size = static_cast<std::size_t>(v);
    }
    return b;
}

/* ------------------------------------------------------------------ */
/* primes and factorization */

BigInt Factorization::product() const
{
    BigInt p = 1;
    for (auto const& f : factors) {
        BigInt t;
        mpz_pow_ui(t.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
        p *= t;
    }
    return p;
}

bool is_prime(const BigInt& n)
{
    if (n < 2) return false;
    /* GMP runs trial division, Baillie-PSW and then reps-24 further
     * Miller-Rabin rounds; BPSW has no counterexample below 2^64. */
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {

BigInt pollard_brent(const BigInt& n, unsigned long seed)
{
    if (mpz_even_p(n.get_mpz_t())) return 2;
    BigInt c = seed, y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1, m = 64;
    auto step = [&](BigInt& v) {
        v = v * v + c;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) step(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                step(y);
                BigInt d = x - y;
                q = q * abs(d) % n;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            step(ys);
            BigInt d = abs(x - ys);
            mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g;
}

void split_into(const BigInt& n, std::map<BigInt, unsigned>& out)
{
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    for (unsigned long seed = 1;; ++seed) {
        BigInt d = pollard_brent(n, seed);
        if (d != n && d != 1) {
            split_into(d, out);
            split_into(n / d, out);
            return;
        }
    }
}

}  // namespace

Factorization factor(const BigInt& n)
{
    if (n < 1) throw InvalidInput("factor: argument must be positive");
    std::map<BigInt, unsigned> found;
    BigInt rest = n;
    for (unsigned long p = 2; p < 10000 && p * p <= rest; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            found[BigInt(p)] += 1;
            rest /= p;
        }
    }
    split_into(rest, found);
    Factorization out;
    out.value = n;
    for (auto const& [p, e] : found) out.factors.push_back({p, e});
    return out;
}

bool is_prime_u64(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        if (n % p == 0) return n == p;
    }
    if (n < 289) return true;
    return is_prime(BigInt(std::to_string(n)));
}

std::vector<std::pair<std::uint64_t, unsigned>> factor_u64(std::uint64_t n)
{
    if (n == 0) throw InvalidInput("factor: argument must be positive");
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n && p < 100000; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) {
        if (is_prime_u64(n)) {
            out.emplace_back(n, 1);
        } else {
            Factorization f = factor(BigInt(std::to_string(n)));
            for (auto const& pp : f.factors) out.emplace_back(pp.prime.get_ui(), pp.exponent);
            std::sort(out.begin(), out.end());
        }
    }
    return out;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (auto const& [p, e] : factor_u64(n)) out.push_back(p);
    return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> out{1};
    for (auto const& [p, e] : factor_u64(n)) {
        std::size_t base = out.size();
        std::uint64_t pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound)
{
    std::vector<bool> composite(bound + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

unsigned valuation(std::uint64_t n, std::uint64_t p)
{
    unsigned v = 0;
    while (n != 0 && n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b)
{
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b)
{
    if (a == 0 || b == 0) return 0;
    return a / gcd_u64(a, b) * b;
}

std::uint64_t pow_u64(std::uint64_t base, unsigned exp)
{
    std::uint64_t r = 1;
    while (exp--) r *= base;
    return r;
}

std::int64_t mod_floor(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw BoundExceeded("64-bit overflow in addition");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw BoundExceeded("64-bit overflow in subtraction");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw BoundExceeded("64-bit overflow in multiplication");
    return r;
}

/* ------------------------------------------------------------------ */
/* matrices */

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, BigInt(0))
{
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<BigInt>>& rows, std::size_t cols)
{
    if (!rows.empty()) cols = rows.front().size();
    IntMatrix m(0, cols);
    for (auto const& r : rows) {
        if (r.size() != cols) throw InvalidInput("IntMatrix: ragged rows");
        m.append_row(r);
    }
    return m;
}

IntMatrix IntMatrix::from_rows_i64(const std::vector<std::vector<std::int64_t>>& rows,
                                   std::size_t cols)
{
    std::vector<std::vector<BigInt>> big;
    for (auto const& r : rows) {
        std::vector<BigInt> b;
        for (auto v : r) b.emplace_back(static_cast<long>(v));
        big.push_back(std::move(b));
    }
    return from_rows(big, cols);
}

std::vector<BigInt> IntMatrix::row_vector(std::size_t r) const
{
    auto s = row(r);
    return {s.begin(), s.end()};
}

void IntMatrix::append_row(std::span<const BigInt> row)
{
    if (row.size() != cols_) throw InvalidInput("IntMatrix: row length mismatch");
    entries_.insert(entries_.end(), row.begin(), row.end());
    ++rows_;
}

bool IntMatrix::is_zero_row(std::size_t r) const
{
    for (auto const& v : row(r))
        if (v != 0) return false;
    return true;
}

std::string IntMatrix::to_string() const
{
    std::ostringstream os;
    os << "[";
    for (std::size_t r = 0; r < rows_; ++r) {
        os << (r ? ", [" : "[");
        for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << at(r, c).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

namespace {

void row_combine(IntMatrix& a, std::size_t r1, std::size_t r2, const BigInt& s, const BigInt& t,
                 const BigInt& u, const BigInt& v)
{
    /* (row1, row2) <- (s*row1 + t*row2, u*row1 + v*row2) */
    for (std::size_t c = 0; c < a.cols(); ++c) {
        BigInt x = a.at(r1, c), y = a.at(r2, c);
        a.at(r1, c) = s * x + t * y;
        a.at(r2, c) = u * x + v * y;
    }
}

void row_sub_multiple(IntMatrix& a, std::size_t target, std::size_t src, const BigInt& q)
{
    if (q == 0) return;
    for (std::size_t c = 0; c < a.cols(); ++c) a.at(target, c) -= q * a.at(src, c);
}

}  // namespace

IntMatrix hnf(const IntMatrix& m)
{
    IntMatrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            if (a.at(i, c) == 0) continue;
            if (a.at(r, c) == 0) {
                row_combine(a, r, i, 0, 1, 1, 0);
                continue;
            }
            BigInt g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.at(r, c).get_mpz_t(),
                       a.at(i, c).get_mpz_t());
            BigInt u = -a.at(i, c) / g, v = a.at(r, c) / g;
            row_combine(a, r, i, s, t, u, v);
        }
        if (a.at(r, c) == 0) continue;
        if (a.at(r, c) < 0)
            for (std::size_t k = 0; k < a.cols(); ++k) a.at(r, k) = -a.at(r, k);
        for (std::size_t i = 0; i < r; ++i) {
            BigInt q;
            mpz_fdiv_q(q.get_mpz_t(), a.at(i, c).get_mpz_t(), a.at(r, c).get_mpz_t());
            row_sub_multiple(a, i, r, q);
        }
        ++r;
    }
    return a;
}

IntMatrix lattice_basis(const IntMatrix& m)
{
    IntMatrix h = hnf(m);
    IntMatrix out(0, m.cols());
    for (std::size_t r = 0; r < h.rows(); ++r)
        if (!h.is_zero_row(r)) out.append_row(h.row(r));
    return out;
}

std::size_t lattice_rank(const IntMatrix& m) { return lattice_basis(m).rows(); }

std::optional<std::vector<BigInt>> lattice_coordinates(const IntMatrix& basis,
                                                       std::span<const BigInt> v)
{
    std::vector<BigInt> rest(v.begin(), v.end());
    std::vector<BigInt> coords(basis.rows());
    for (std::size_t r = 0; r < basis.rows(); ++r) {
        std::size_t p = 0;
        while (p < basis.cols() && basis.at(r, p) == 0) ++p;
        if (p == basis.cols()) return std::nullopt;
        if (!mpz_divisible_p(rest[p].get_mpz_t(), basis.at(r, p).get_mpz_t()))
            return std::nullopt;
        coords[r] = rest[p] / basis.at(r, p);
        for (std::size_t c = p; c < basis.cols(); ++c) rest[c] -= coords[r] * basis.at(r, c);
    }
    for (auto const& x : rest)
        if (x != 0) return std::nullopt;
    return coords;
}

bool lattice_contains(const IntMatrix& lattice, std::span<const BigInt> v)
{
    return lattice_coordinates(lattice_basis(lattice), v).has_value();
}

bool lattice_equal(const IntMatrix& a, const IntMatrix& b)
{
    return lattice_basis(a) == lattice_basis(b);
}

std::optional<BigInt> lattice_index(const IntMatrix& sub, const IntMatrix& sup)
{
    if (sub.cols() != sup.cols()) throw InvalidInput("lattice_index: ambient dimensions differ");
    IntMatrix bsup = lattice_basis(sup), bsub = lattice_basis(sub);
    IntMatrix coords(0, bsup.rows());
    for (std::size_t r = 0; r < bsub.rows(); ++r) {
        auto x = lattice_coordinates(bsup, bsub.row(r));
        if (!x) throw InvalidInput("lattice_index: sub is not contained in sup");
        coords.append_row(*x);
    }
    if (bsub.rows() != bsup.rows()) return std::nullopt;
    IntMatrix h = hnf(coords);
    BigInt det = 1;
    for (std::size_t i = 0; i < h.rows(); ++i) det *= h.at(i, i);
    return abs(det);
}

std::vector<BigInt> smith_invariants(const IntMatrix& m)
{
    IntMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<BigInt> diag;
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            /* smallest nonzero entry of the trailing block becomes the pivot */
            std::size_t pr = rows, pc = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (a.at(i, j) != 0 &&
                        (pr == rows || abs(a.at(i, j)) < abs(a.at(pr, pc)))) {
                        pr = i;
                        pc = j;
                    }
            if (pr == rows) return diag;
            if (pr != t)
                for (std::size_t j = 0; j < cols; ++j) std::swap(a.at(pr, j), a.at(t, j));
            if (pc != t)
                for (std::size_t i = 0; i < rows; ++i) std::swap(a.at(i, pc), a.at(i, t));
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                BigInt q;
                mpz_fdiv_q(q.get_mpz_t(), a.at(i, t).get_mpz_t(), a.at(t, t).get_mpz_t());
                row_sub_multiple(a, i, t, q);
                if (a.at(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                BigInt q;
                mpz_fdiv_q(q.get_mpz_t(), a.at(t, j).get_mpz_t(), a.at(t, t).get_mpz_t());
                if (q != 0)
                    for (std::size_t i = 0; i < rows; ++i) a.at(i, j) -= q * a.at(i, t);
                if (a.at(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            /* pivot must divide the whole trailing block */
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (!mpz_divisible_p(a.at(i, j).get_mpz_t(), a.at(t, t).get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == rows) break;
            for (std::size_t j = 0; j < cols; ++j) a.at(t, j) += a.at(bad, j);
        }
        diag.push_back(abs(a.at(t, t)));
    }
    return diag;
}

std::size_t rank_mod_p(const IntMatrix& m, std::uint64_t p)
{
    std::vector<std::vector<std::uint64_t>> a(m.rows(), std::vector<std::uint64_t>(m.cols()));
    BigInt bp(static_cast<unsigned long>(p));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            BigInt r;
            mpz_fdiv_r(r.get_mpz_t(), m.at(i, j).get_mpz_t(), bp.get_mpz_t());
            a[i][j] = r.get_ui();
        }
    auto inv = [p](std::uint64_t x) {
        std::uint64_t r = 1, e = p - 2;
        unsigned __int128 b = x;
        while (e) {
            if (e & 1) r = static_cast<std::uint64_t>((unsigned __int128)r * b % p);
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
        std::size_t piv = rank;
        while (piv < m.rows() && a[piv][c] == 0) ++piv;
        if (piv == m.rows()) continue;
        std::swap(a[piv], a[rank]);
        std::uint64_t iv = inv(a[rank][c]);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == rank || a[i][c] == 0) continue;
            std::uint64_t f = static_cast<std::uint64_t>((unsigned __int128)a[i][c] * iv % p);
            for (std::size_t j = c; j < m.cols(); ++j)
                a[i][j] = (a[i][j] + p - static_cast<std::uint64_t>((unsigned __int128)f * a[rank][j] % p)) % p;
        }
        ++rank;
    }
    return rank;
}

std::size_t rational_rank(const std::vector<std::vector<Rational>>& rows)
{
    if (rows.empty()) return 0;
    auto a = rows;
    const std::size_t cols = a.front().size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
        std::size_t piv = rank;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t i = rank + 1; i < a.size(); ++i) {
            if (a[i][c] == 0) continue;
            Rational f = a[i][c] / a[rank][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace lf
