#include "lambda_forge/witt_periodic.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "lambda_forge/error.hpp"

namespace lf {

namespace {

using Elem = CoeffRing::Elem;

IntPoly x_pow(std::uint64_t k) { return IntPoly::monomial(k); }

IntPoly cyclotomic_poly(std::uint64_t n)
{
    IntPoly f = x_pow(n) - IntPoly::constant(1);
    for (auto d : divisors(n))
        if (d < n) f = divmod_monic(f, cyclotomic_poly(d)).first;
    return f;
}

std::uint64_t euler_phi(std::uint64_t n)
{
    std::uint64_t r = n;
    for (auto p : prime_divisors(n)) r = r / p * (p - 1);
    return r;
}

IntPoly to_poly(const Elem& e) { return IntPoly(e); }

/* Rows of the sublattice {x * basis : for each constraint k,
 * values[k](x * basis) = 0 mod moduli[k]} (modulus 0 = equality), where
 * values[k][j] is the value on basis row j. */
IntMatrix sublattice_where(const IntMatrix& basis, const std::vector<std::vector<BigInt>>& values,
                           const std::vector<BigInt>& moduli)
{
    const std::size_t k = basis.rows(), c = moduli.size();
    if (k == 0) return basis;
    IntMatrix aug(0, c + k);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<BigInt> row(c + k);
        for (std::size_t i = 0; i < c; ++i) row[i] = values[i][j];
        row[c + j] = 1;
        aug.append_row(row);
    }
    for (std::size_t i = 0; i < c; ++i) {
        if (moduli[i] == 0) continue;
        std::vector<BigInt> row(c + k);
        row[i] = moduli[i];
        aug.append_row(row);
    }
    IntMatrix h = hnf(aug);
    IntMatrix out(0, basis.cols());
    for (std::size_t r = 0; r < h.rows(); ++r) {
        bool head_zero = true;
        for (std::size_t i = 0; i < c && head_zero; ++i) head_zero = h.at(r, i) == 0;
        if (!head_zero || h.is_zero_row(r)) continue;
        std::vector<BigInt> v(basis.cols());
        for (std::size_t j = 0; j < k; ++j) {
            const BigInt& x = h.at(r, c + j);
            if (x == 0) continue;
            for (std::size_t col = 0; col < basis.cols(); ++col) v[col] += x * basis.at(j, col);
        }
        out.append_row(v);
    }
    return lattice_basis(out);
}

/* Periodic ghost tuples over a ring of rank d, flattened as c * d + i. */
struct PeriodicSpace {
    std::uint64_t n;
    std::size_t d;
    Elem slot(std::span<const BigInt> v, std::uint64_t c) const
    {
        return Elem(v.begin() + static_cast<std::ptrdiff_t>(c * d), v.begin() + static_cast<std::ptrdiff_t>((c + 1) * d));
    }
};

/* G_{target} - map(G_{source}) = 0 mod modulus, as d scalar constraints */
template <class Map>
IntMatrix impose(const IntMatrix& L, const PeriodicSpace& S, std::uint64_t target, std::uint64_t source,
                 const Map& map, const BigInt& modulus)
{
    std::vector<std::vector<BigInt>> values(S.d, std::vector<BigInt>(L.rows()));
    bool satisfied = true;
    for (std::size_t j = 0; j < L.rows(); ++j) {
        Elem t = S.slot(L.row(j), target), s = map(S.slot(L.row(j), source));
        for (std::size_t i = 0; i < S.d; ++i) {
            values[i][j] = t[i] - s[i];
            if (modulus == 0 ? values[i][j] != 0 : !mpz_divisible_p(values[i][j].get_mpz_t(), modulus.get_mpz_t()))
                satisfied = false;
        }
    }
    if (satisfied) return L;
    return sublattice_where(L, values, std::vector<BigInt>(S.d, modulus));
}

BigInt big_pow(std::uint64_t p, unsigned e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, e);
    return r;
}

std::uint64_t prime_in_class(std::uint64_t r, std::uint64_t n)
{
    for (std::uint64_t p = r == 0 ? n : r; ; p += n)
        if (p >= 2 && is_prime_u64(p) && n % p != 0) return p;
}

/* Periodic ghost tuple -> ghost vector on 1..bound */
GhostVector periodic_extension(const PeriodicSpace& S, std::span<const BigInt> v, std::uint64_t bound)
{
    GhostVector g{TruncationSet::up_to(bound), {}};
    for (std::uint64_t a = 1; a <= bound; ++a) g.comp.push_back(S.slot(v, a % S.n));
    return g;
}

IntMatrix lattice_at(std::uint64_t n, const CoeffRing& R, std::uint64_t bound)
{
    PeriodicSpace S{n, R.rank()};
    IntMatrix L = IntMatrix::identity(n * S.d);
    auto phi = [&](std::uint64_t p) { return [&R, p](const Elem& e) { return R.frobenius(p, e); }; };

    /* the infinite families: equalities */
    for (std::uint64_t r = 0; r < n; ++r) {
        if (gcd_u64(r, n) != 1) continue;
        auto p = prime_in_class(r, n);
        for (std::uint64_t c = 0; c < n; ++c) L = impose(L, S, p * c % n, c, phi(p), 0);
    }
    for (auto p : prime_divisors(n)) {
        auto vn = valuation(n, p);
        for (std::uint64_t c = 0; c < n; ++c) {
            bool unbounded = c == 0 || valuation(c, p) >= vn;
            if (unbounded) L = impose(L, S, p * c % n, c, phi(p), 0);
        }
    }
    /* pinned valuations: congruences */
    for (auto p : prime_divisors(n)) {
        auto vn = valuation(n, p);
        for (std::uint64_t c = 1; c < n; ++c) {
            auto vc = valuation(c, p);
            if (vc < vn) L = impose(L, S, p * c % n, c, phi(p), big_pow(p, vc + 1));
        }
    }
    /* the literal bounded congruences */
    std::set<std::tuple<std::uint64_t, std::uint64_t, unsigned>> seen;
    for (auto p : primes_up_to(bound)) {
        for (std::uint64_t m = 1; p * m <= bound; ++m) {
            auto v = valuation(m, p);
            if (!seen.insert({p, m % n, v}).second) continue;
            L = impose(L, S, p * m % n, m % n, phi(p), big_pow(p, v + 1));
        }
    }
    return L;
}

/* v in the Q-span of the rows, via a cached echelon form */
class RationalSpan {
  public:
    explicit RationalSpan(const IntMatrix& basis)
    {
        for (std::size_t r = 0; r < basis.rows(); ++r) {
            std::vector<Rational> v(basis.row(r).begin(), basis.row(r).end());
            if (reduce(v)) add(std::move(v));
        }
    }
    std::size_t dim() const { return rows_.size(); }
    bool contains(std::vector<Rational> v) const { return !reduce(v); }

  private:
    /* true if something is left */
    bool reduce(std::vector<Rational>& v) const
    {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Rational& x = v[pivots_[i]];
            if (x == 0) continue;
            Rational f = x;
            for (std::size_t c = 0; c < v.size(); ++c) v[c] -= f * rows_[i][c];
        }
        return std::any_of(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
    }
    void add(std::vector<Rational> v)
    {
        std::size_t p = 0;
        while (v[p] == 0) ++p;
        Rational lead = v[p];
        for (auto& x : v) x /= lead;
        for (auto& row : rows_) {
            Rational f = row[p];
            if (f == 0) continue;
            for (std::size_t c = 0; c < v.size(); ++c) row[c] -= f * v[c];
        }
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
    }
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::size_t> pivots_;
};

/* Galois-equivariant periodic ghost tuples over Z[zeta_n] */
IntMatrix equivariant_lattice(std::uint64_t n, const CoeffRing& Zz)
{
    PeriodicSpace S{n, Zz.rank()};
    IntMatrix L = IntMatrix::identity(n * S.d);
    for (std::uint64_t r = 0; r < n; ++r) {
        if (gcd_u64(r, n) != 1 || r == 1 % n) continue;
        auto sigma = [&](const Elem& e) { return Zz.from_poly(compose(to_poly(e), x_pow(r))); };
        for (std::uint64_t c = 0; c < n; ++c) L = impose(L, S, r * c % n, c, sigma, 0);
    }
    return L;
}

}  // namespace

/* ---------------------------------------------------------------- */

CoeffRing CoeffRing::integers() { return CoeffRing(); }

CoeffRing CoeffRing::quotient(const IntPoly& h)
{
    if (h.degree() < 1 || h.leading() != 1) throw InvalidInput("modulus must be monic of degree >= 1");
    CoeffRing R;
    R.modulus_ = h;
    R.rank_ = static_cast<std::size_t>(h.degree());
    return R;
}

CoeffRing CoeffRing::parse(const std::string& ring, const std::string& frob)
{
    CoeffRing R = (ring == "Z" || ring == "z" || ring == "integers") ? integers() : quotient(parse_int_poly(ring));
    if (frob.empty() || frob == "id") {
        if (frob == "id" && !R.is_integers()) throw InvalidInput("'id' is not a Frobenius lift on " + ring);
    } else if (frob == "p:x^p") {
        R.set_power_frobenius();
    } else {
        throw InvalidInput("unknown Frobenius rule '" + frob + "' (expected p:x^p or id)");
    }
    return R;
}

void CoeffRing::set_power_frobenius()
{
    power_rule_ = true;
    validated_ = std::make_shared<std::map<std::uint64_t, Elem>>();
}

void CoeffRing::set_frobenius(std::uint64_t p, const IntPoly& image)
{
    if (!is_prime_u64(p)) throw InvalidInput("Frobenius lifts are indexed by primes");
    if (is_integers()) throw InvalidInput("Z has only the identity lift");
    explicit_[p] = from_poly(image);
    validated_ = std::make_shared<std::map<std::uint64_t, Elem>>();
    validate_frobenius(p);
}

std::string CoeffRing::describe() const
{
    if (is_integers()) return "Z";
    return "Z[x]/(" + modulus_.format("x") + ")";
}

Elem CoeffRing::from_int(const BigInt& k) const
{
    Elem e(rank_);
    e[0] = k;
    return e;
}

Elem CoeffRing::generator() const
{
    if (is_integers()) return one();
    return from_poly(x_pow(1));
}

Elem CoeffRing::reduce(std::vector<BigInt> c) const
{
    if (!is_integers()) {
        const auto& h = modulus_.coeffs();
        for (std::size_t k = c.size(); k-- > rank_;) {
            if (c[k] == 0) continue;
            BigInt t = c[k];
            for (std::size_t i = 0; i <= rank_; ++i) c[k - rank_ + i] -= t * h[i];
        }
    } else {
        /* Z: only the constant term is meaningful */
        c.resize(std::max<std::size_t>(c.size(), 1));
        for (std::size_t k = 1; k < c.size(); ++k)
            if (c[k] != 0) throw InvalidInput("not an integer");
    }
    c.resize(rank_);
    return c;
}

CoeffRing::RatElem CoeffRing::reduce_rat(std::vector<Rational> c) const
{
    if (!is_integers()) {
        const auto& h = modulus_.coeffs();
        for (std::size_t k = c.size(); k-- > rank_;) {
            if (c[k] == 0) continue;
            Rational t = c[k];
            for (std::size_t i = 0; i <= rank_; ++i) c[k - rank_ + i] -= t * h[i];
        }
    }
    c.resize(rank_);
    return c;
}

Elem CoeffRing::from_poly(const IntPoly& p) const
{
    if (is_integers()) {
        if (p.degree() > 0) throw InvalidInput("not an integer: " + p.format("x"));
        return from_int(p.coeff(0));
    }
    return reduce(p.coeffs());
}

Elem CoeffRing::parse_elem(const std::string& s) const { return from_poly(parse_int_poly(s)); }

std::string CoeffRing::format(const Elem& e) const
{
    if (is_integers()) return e[0].get_str();
    return IntPoly(e).format("x");
}

Elem CoeffRing::add(const Elem& a, const Elem& b) const
{
    Elem r(rank_);
    for (std::size_t i = 0; i < rank_; ++i) r[i] = a[i] + b[i];
    return r;
}

Elem CoeffRing::sub(const Elem& a, const Elem& b) const
{
    Elem r(rank_);
    for (std::size_t i = 0; i < rank_; ++i) r[i] = a[i] - b[i];
    return r;
}

Elem CoeffRing::mul(const Elem& a, const Elem& b) const
{
    std::vector<BigInt> r(2 * rank_ - 1);
    for (std::size_t i = 0; i < rank_; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < rank_; ++j) r[i + j] += a[i] * b[j];
    }
    if (is_integers()) return {r[0]};
    return reduce(std::move(r));
}

Elem CoeffRing::scale(const Elem& a, const BigInt& k) const
{
    Elem r(a);
    for (auto& x : r) x *= k;
    return r;
}

Elem CoeffRing::pow(const Elem& a, std::uint64_t e) const
{
    Elem result = one(), base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return result;
}

bool CoeffRing::divisible(const Elem& a, const BigInt& k) const
{
    return std::all_of(a.begin(), a.end(), [&](const BigInt& x) { return mpz_divisible_p(x.get_mpz_t(), k.get_mpz_t()); });
}

Elem CoeffRing::div_exact(const Elem& a, const BigInt& k) const
{
    if (!divisible(a, k)) throw InvalidInput("inexact division");
    Elem r(a);
    for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), k.get_mpz_t());
    return r;
}

CoeffRing::RatElem CoeffRing::to_rat(const Elem& a) const { return RatElem(a.begin(), a.end()); }

CoeffRing::RatElem CoeffRing::rat_add(const RatElem& a, const RatElem& b) const
{
    RatElem r(rank_);
    for (std::size_t i = 0; i < rank_; ++i) r[i] = a[i] + b[i];
    return r;
}

CoeffRing::RatElem CoeffRing::rat_mul(const RatElem& a, const RatElem& b) const
{
    std::vector<Rational> r(2 * rank_ - 1);
    for (std::size_t i = 0; i < rank_; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < rank_; ++j) r[i + j] += a[i] * b[j];
    }
    return reduce_rat(std::move(r));
}

CoeffRing::RatElem CoeffRing::rat_pow(const RatElem& a, std::uint64_t e) const
{
    RatElem result = to_rat(one()), base = a;
    while (e) {
        if (e & 1) result = rat_mul(result, base);
        e >>= 1;
        if (e) base = rat_mul(base, base);
    }
    return result;
}

bool CoeffRing::is_integral(const RatElem& a) const
{
    return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x.get_den() == 1; });
}

bool CoeffRing::has_frobenius(std::uint64_t p) const
{
    return is_prime_u64(p) && (is_integers() || power_rule_ || explicit_.count(p));
}

const Elem& CoeffRing::frobenius_image(std::uint64_t p) const
{
    auto it = validated_->find(p);
    if (it != validated_->end()) return it->second;
    validate_frobenius(p);
    return validated_->at(p);
}

void CoeffRing::validate_frobenius(std::uint64_t p) const
{
    if (!has_frobenius(p)) throw InvalidInput("no Frobenius lift declared at p = " + std::to_string(p) + " on " + describe());
    if (validated_->count(p)) return;
    Elem img;
    if (is_integers()) img = one();
    else if (auto it = explicit_.find(p); it != explicit_.end()) img = it->second;
    else img = from_poly(x_pow(p));

    if (!is_integers()) {
        auto eval = [&](const IntPoly& f, const Elem& at) {
            Elem r = zero();
            for (std::size_t k = f.coeffs().size(); k-- > 0;) r = add(mul(r, at), from_int(f.coeffs()[k]));
            return r;
        };
        /* h(phi(x)) = 0 in R */
        const auto& h = modulus_.coeffs();
        Elem acc = zero(), power = one();
        for (std::size_t k = 0; k < h.size(); ++k) {
            acc = add(acc, scale(power, h[k]));
            power = mul(power, img);
        }
        for (auto& x : acc)
            if (x != 0) throw InvalidInput("phi_" + std::to_string(p) + " is not well defined on " + describe());
        Elem diff = sub(img, pow(generator(), p));
        if (!divisible(diff, BigInt(static_cast<unsigned long>(p))))
            throw InvalidInput("phi_" + std::to_string(p) + "(x) is not x^p mod p");
        for (auto const& [q, other] : *validated_) {
            if (eval(IntPoly(img), other) != eval(IntPoly(other), img))
                throw InvalidInput("phi_" + std::to_string(p) + " and phi_" + std::to_string(q) + " do not commute");
        }
    }
    (*validated_)[p] = img;
}

Elem CoeffRing::frobenius(std::uint64_t p, const Elem& a) const
{
    if (is_integers()) {
        validate_frobenius(p);
        return a;
    }
    const Elem& img = frobenius_image(p);
    Elem r = zero();
    for (std::size_t k = rank_; k-- > 0;) r = add(mul(r, img), from_int(a[k]));
    return r;
}

Elem CoeffRing::adams(std::uint64_t a, const Elem& e) const
{
    if (a == 0) throw InvalidInput("psi_0 is not defined");
    Elem r = e;
    for (auto [p, k] : factor_u64(a))
        for (unsigned i = 0; i < k; ++i) r = frobenius(p, r);
    return r;
}

/* ---------------------------------------------------------------- */

TruncationSet::TruncationSet(std::vector<std::uint64_t> elems) : elems_(std::move(elems))
{
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    if (elems_.empty()) throw InvalidInput("empty truncation set");
    if (elems_.front() == 0) throw InvalidInput("truncation sets contain positive integers");
    for (auto n : elems_)
        for (auto d : divisors(n))
            if (!contains(d))
                throw InvalidInput("truncation set is not divisor-closed: " + std::to_string(d) + " | " +
                                   std::to_string(n));
}

TruncationSet TruncationSet::divisors_of(std::uint64_t n)
{
    if (n == 0) throw InvalidInput("div:0");
    return TruncationSet(divisors(n));
}

TruncationSet TruncationSet::up_to(std::uint64_t bound)
{
    if (bound == 0) throw InvalidInput("upto:0");
    std::vector<std::uint64_t> v(bound);
    for (std::uint64_t i = 0; i < bound; ++i) v[i] = i + 1;
    return TruncationSet(std::move(v));
}

TruncationSet TruncationSet::parse(const std::string& s)
{
    auto number = [&](const std::string& t) -> std::uint64_t {
        if (t.empty() || t.size() > 9 || !std::all_of(t.begin(), t.end(), ::isdigit))
            throw InvalidInput("bad truncation set '" + s + "'");
        return std::stoull(t);
    };
    if (s.rfind("div:", 0) == 0) return divisors_of(number(s.substr(4)));
    if (s.rfind("upto:", 0) == 0) return up_to(number(s.substr(5)));
    std::vector<std::uint64_t> v;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) v.push_back(number(item));
    return TruncationSet(std::move(v));
}

bool TruncationSet::contains(std::uint64_t n) const { return std::binary_search(elems_.begin(), elems_.end(), n); }

std::size_t TruncationSet::index_of(std::uint64_t n) const
{
    auto it = std::lower_bound(elems_.begin(), elems_.end(), n);
    if (it == elems_.end() || *it != n) throw InvalidInput(std::to_string(n) + " is not in the truncation set");
    return static_cast<std::size_t>(it - elems_.begin());
}

TruncationSet TruncationSet::divide(std::uint64_t a) const
{
    std::vector<std::uint64_t> v;
    for (auto n : elems_)
        if (n % a == 0) v.push_back(n / a);
    if (v.empty()) throw InvalidInput("T / " + std::to_string(a) + " is empty");
    return TruncationSet(std::move(v));
}

/* ---------------------------------------------------------------- */

bool RationalWitt::all_integral() const { return std::all_of(integral.begin(), integral.end(), [](bool b) { return b; }); }

WittVector RationalWitt::to_integral() const
{
    if (!all_integral()) throw PreconditionFailed("Witt coordinates are not integral");
    WittVector w{T, {}};
    for (auto const& c : coord) {
        Elem e;
        for (auto const& x : c) e.push_back(x.get_num());
        w.coord.push_back(std::move(e));
    }
    return w;
}

GhostVector ghost_from_witt(const CoeffRing& R, const WittVector& w)
{
    if (w.coord.size() != w.T.size()) throw InvalidInput("coordinate count does not match the truncation set");
    GhostVector g{w.T, {}};
    for (auto n : w.T.elems()) {
        Elem s = R.zero();
        for (auto d : divisors(n))
            s = R.add(s, R.scale(R.pow(w.coord[w.T.index_of(d)], n / d), BigInt(static_cast<unsigned long>(d))));
        g.comp.push_back(std::move(s));
    }
    return g;
}

RationalWitt witt_from_ghost(const CoeffRing& R, const GhostVector& g)
{
    if (g.comp.size() != g.T.size()) throw InvalidInput("component count does not match the truncation set");
    RationalWitt w{g.T, {}, {}};
    for (auto n : g.T.elems()) {
        auto s = R.to_rat(g.at(n));
        for (auto d : divisors(n)) {
            if (d == n) continue;
            auto t = R.rat_pow(w.coord[g.T.index_of(d)], n / d);
            for (auto& x : t) x *= -static_cast<long>(d);
            s = R.rat_add(s, t);
        }
        for (auto& x : s) x /= static_cast<unsigned long>(n);
        w.integral.push_back(R.is_integral(s));
        w.coord.push_back(std::move(s));
    }
    return w;
}

bool ghost_is_integral(const CoeffRing& R, const GhostVector& g)
{
    std::vector<Elem> w;
    for (auto n : g.T.elems()) {
        Elem s = g.at(n);
        for (auto d : divisors(n))
            if (d != n) s = R.sub(s, R.scale(R.pow(w[g.T.index_of(d)], n / d), BigInt(static_cast<unsigned long>(d))));
        BigInt nn(static_cast<unsigned long>(n));
        if (!R.divisible(s, nn)) return false;
        w.push_back(R.div_exact(s, nn));
    }
    return true;
}

bool dwork_check(const CoeffRing& R, const GhostVector& g)
{
    for (auto n : g.T.elems())
        for (auto p : prime_divisors(n)) {
            auto m = n / p;
            Elem diff = R.sub(g.at(n), R.frobenius(p, g.at(m)));
            if (!R.divisible(diff, big_pow(p, valuation(m, p) + 1))) return false;
        }
    return true;
}

WittVector teichmuller(const CoeffRing& R, const Elem& r, const TruncationSet& T)
{
    WittVector w{T, std::vector<Elem>(T.size(), R.zero())};
    w.coord[0] = r;
    return w;
}

GhostVector ghost_add(const CoeffRing& R, const GhostVector& a, const GhostVector& b)
{
    if (!(a.T == b.T)) throw InvalidInput("truncation sets differ");
    GhostVector g{a.T, {}};
    for (std::size_t i = 0; i < a.comp.size(); ++i) g.comp.push_back(R.add(a.comp[i], b.comp[i]));
    return g;
}

GhostVector ghost_mul(const CoeffRing& R, const GhostVector& a, const GhostVector& b)
{
    if (!(a.T == b.T)) throw InvalidInput("truncation sets differ");
    GhostVector g{a.T, {}};
    for (std::size_t i = 0; i < a.comp.size(); ++i) g.comp.push_back(R.mul(a.comp[i], b.comp[i]));
    return g;
}

GhostVector ghost_shift(const GhostVector& g, std::uint64_t a)
{
    if (a == 0) throw InvalidInput("psi_0 is not defined");
    GhostVector out{g.T.divide(a), {}};
    for (auto b : out.T.elems()) out.comp.push_back(g.at(a * b));
    return out;
}

GhostVector lambda_lift(const CoeffRing& R, const Elem& r, const TruncationSet& T)
{
    GhostVector g{T, {}};
    for (auto a : T.elems()) g.comp.push_back(R.adams(a, r));
    return g;
}

bool is_f_periodic(const GhostVector& g, const RationalDomain::Cycle& f, const RationalDomain::Support& P)
{
    RationalDomain Q;
    EquivTester<RationalDomain> equiv(Q, f, P);
    std::vector<std::uint64_t> in;
    for (auto a : g.T.elems())
        if (in_support(Q, a, P)) in.push_back(a);
    for (std::size_t i = 0; i < in.size(); ++i)
        for (std::size_t j = i + 1; j < in.size(); ++j)
            if (g.at(in[i]) != g.at(in[j]) && equiv(in[i], in[j])) return false;
    return true;
}

bool frobenius_congruence_check(const CoeffRing& R, const GhostVector& g, std::uint64_t p)
{
    if (!is_prime_u64(p)) throw InvalidInput("p must be prime");
    if (!dwork_check(R, g)) throw PreconditionFailed("the ghost vector is not a Witt vector");
    GhostVector shifted = ghost_shift(g, p);
    BigInt pp(static_cast<unsigned long>(p));
    GhostVector q{shifted.T, {}};
    for (auto b : shifted.T.elems()) {
        Elem h = R.sub(shifted.at(b), R.pow(g.at(b), p));
        if (!R.divisible(h, pp)) return false;
        q.comp.push_back(R.div_exact(h, pp));
    }
    return dwork_check(R, q);
}

/* ---------------------------------------------------------------- */

PeriodicWittLattice periodic_witt_lattice(std::uint64_t n, const CoeffRing& R, std::uint64_t bound)
{
    if (n == 0) throw InvalidInput("n must be positive");
    if (bound < 2) throw InvalidInput("bound must be at least 2");
    if (!R.is_integers()) {
        const auto& h = R.modulus();
        auto k = static_cast<std::uint64_t>(h.degree());
        if (!R.power_frobenius() || h != x_pow(k) - IntPoly::constant(1) || n % k != 0)
            throw InvalidInput("periodic lattices need Z, or Z[x]/(x^k - 1) with k | n and x -> x^p");
    }
    PeriodicWittLattice out;
    out.n = n;
    out.bound = bound;
    out.basis = lattice_at(n, R, bound);
    out.half_basis = lattice_at(n, R, bound / 2);
    out.stable = lattice_equal(out.basis, out.half_basis);
    return out;
}

std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    default: return "inconclusive";
    }
}

WittIsoReport ray_class_algebra_witt_iso_report(std::uint64_t n, std::uint64_t bound)
{
    if (n == 0) throw InvalidInput("n must be positive");
    if (bound < 2 * n) throw InvalidInput("bound must be at least 2n");
    WittIsoReport rep;
    rep.n = n;
    rep.bound = bound;

    CoeffRing Zz = CoeffRing::quotient(cyclotomic_poly(n));
    PeriodicSpace S{n, Zz.rank()};
    IntMatrix L0 = equivariant_lattice(n, Zz);

    IntMatrix image(0, n * S.d);
    for (std::uint64_t j = 0; j < n; ++j) {
        std::vector<BigInt> row;
        for (std::uint64_t c = 0; c < n; ++c) {
            auto z = Zz.from_poly(x_pow(c * j % n));
            row.insert(row.end(), z.begin(), z.end());
        }
        image.append_row(row);
    }
    rep.image_rank = lattice_rank(image);
    rep.injective = rep.image_rank == n;
    rep.teichmuller_integral = true;
    for (std::size_t j = 0; j < image.rows(); ++j)
        rep.teichmuller_integral = rep.teichmuller_integral && ghost_is_integral(Zz, periodic_extension(S, image.row(j), bound));

    /* the same map into ghost tuples over Z[x]/(x^n - 1) */
    CoeffRing group_ring = CoeffRing::quotient(x_pow(n) - IntPoly::constant(1));
    group_ring.set_power_frobenius();
    auto GL = periodic_witt_lattice(n, group_ring, bound);
    rep.group_ring_lattice_rank = GL.rank();
    rep.image_in_group_ring_lattice = true;
    for (std::uint64_t j = 0; j < n; ++j) {
        std::vector<BigInt> row(n * n);
        for (std::uint64_t c = 0; c < n; ++c) row[c * n + c * j % n] = 1;
        rep.image_in_group_ring_lattice = rep.image_in_group_ring_lattice && lattice_contains(GL.basis, row);
    }

    if (!rep.injective || L0.rows() != n) {
        rep.verdict = Verdict::fails;
        return rep;
    }
    IntMatrix coords(0, n);
    for (std::size_t j = 0; j < image.rows(); ++j) {
        auto c = lattice_coordinates(L0, image.row(j));
        if (!c) {
            rep.verdict = Verdict::fails;
            return rep;
        }
        coords.append_row(*c);
    }
    IntMatrix H = lattice_basis(coords);
    std::vector<std::uint64_t> box(n);
    rep.index = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (!H.at(i, i).fits_ulong_p() || H.at(i, i) > 1000000) throw BoundExceeded("index of the image is too large");
        box[i] = H.at(i, i).get_ui();
        rep.index *= H.at(i, i);
    }
    if (rep.index > BigInt(1) << 22) throw BoundExceeded("index of the image is too large to enumerate");

    std::vector<std::uint64_t> digit(n, 0);
    for (;;) {
        std::vector<BigInt> v(n * S.d);
        for (std::size_t i = 0; i < n; ++i)
            if (digit[i])
                for (std::size_t col = 0; col < v.size(); ++col) v[col] += digit[i] * L0.at(i, col);
        if (ghost_is_integral(Zz, periodic_extension(S, v, bound / 2))) {
            ++rep.cosets_passing_half;
            if (ghost_is_integral(Zz, periodic_extension(S, v, bound))) ++rep.cosets_passing;
        }
        std::size_t i = 0;
        while (i < n && ++digit[i] == box[i]) digit[i++] = 0;
        if (i == n) break;
    }
    rep.stable = rep.cosets_passing == rep.cosets_passing_half;
    rep.equal = rep.cosets_passing == 1;
    if (!rep.teichmuller_integral || !rep.image_in_group_ring_lattice) rep.verdict = Verdict::fails;
    else if (!rep.stable) rep.verdict = Verdict::inconclusive;
    else rep.verdict = rep.equal ? Verdict::holds : Verdict::fails;
    return rep;
}

bool ray_class_algebra_witt_iso_check(std::uint64_t n, std::uint64_t bound)
{
    return ray_class_algebra_witt_iso_report(n, bound).verdict == Verdict::holds;
}

FieldProductReport periodic_witt_field_product_report(std::uint64_t n)
{
    if (n == 0) throw InvalidInput("n must be positive");
    if (n > 16) throw BoundExceeded("idempotent search is exponential in n; n <= 16");
    FieldProductReport rep;
    rep.n = n;
    CoeffRing Zz = CoeffRing::quotient(cyclotomic_poly(n));
    const std::size_t d = Zz.rank();
    IntMatrix L0 = equivariant_lattice(n, Zz);
    RationalSpan span(L0);
    rep.dimension = span.dim();

    auto as_vector = [&](std::uint64_t mask) {
        std::vector<Rational> v(n * d);
        for (std::uint64_t c = 0; c < n; ++c)
            if (mask >> c & 1) v[c * d] = 1;
        return v;
    };
    std::vector<std::uint64_t> idem;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask)
        if (span.contains(as_vector(mask))) idem.push_back(mask);
    std::vector<std::uint64_t> primitive;
    for (auto e : idem) {
        bool minimal = std::none_of(idem.begin(), idem.end(), [&](std::uint64_t f) { return f != e && (f & e) == f; });
        if (minimal) primitive.push_back(e);
    }
    std::uint64_t cover = 0;
    bool disjoint = true;
    for (auto e : primitive) {
        disjoint = disjoint && (cover & e) == 0;
        cover |= e;
        std::vector<int> bits(n);
        for (std::uint64_t c = 0; c < n; ++c) bits[c] = static_cast<int>(e >> c & 1);
        rep.idempotents.push_back(bits);
        /* dim e A = rank of e * (basis of A) */
        std::vector<std::vector<Rational>> rows;
        for (std::size_t r = 0; r < L0.rows(); ++r) {
            std::vector<Rational> v(n * d);
            for (std::uint64_t c = 0; c < n; ++c)
                if (e >> c & 1)
                    for (std::size_t i = 0; i < d; ++i) v[c * d + i] = L0.at(r, c * d + i);
            rows.push_back(std::move(v));
        }
        rep.factor_dims.push_back(rational_rank(rows));
    }
    std::sort(rep.factor_dims.begin(), rep.factor_dims.end());
    rep.orthogonal_complete = disjoint && cover == (std::uint64_t{1} << n) - 1;

    std::vector<std::size_t> expected;
    for (auto e : divisors(n)) expected.push_back(euler_phi(e));
    std::sort(expected.begin(), expected.end());
    std::size_t total = 0;
    for (auto x : rep.factor_dims) total += x;
    rep.ok = rep.orthogonal_complete && rep.dimension == n && total == n && rep.factor_dims == expected;
    return rep;
}

bool periodic_witt_field_product_check(std::uint64_t n) { return periodic_witt_field_product_report(n).ok; }

}  // namespace lf
