#include "lambda_forge/quad_field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>
#include <tuple>

#include "lambda_forge/exact_arith.hpp"

namespace lf {

namespace {

std::int64_t isqrt_floor(std::int64_t n)
{
    if (n < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

struct ExtGcd {
    std::int64_t g, s, t;
};

ExtGcd ext_gcd(std::int64_t a, std::int64_t b)
{
    std::int64_t s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b != 0) {
        std::int64_t q = a / b;
        std::tie(a, b) = std::make_pair(b, a - q * b);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
    }
    if (a < 0) return {-a, -s0, -t0};
    return {a, s0, t0};
}

/* Z-lattice in O_K with basis rows (C, B), (0, A) in (w-coeff, 1-coeff)
 * coordinates, i.e. {C*w + B, A}. */
struct Lat2 {
    std::int64_t C = 0, B = 0, A = 0;

    void add(const QuadInt& v)
    {
        std::int64_t y = v.b, x = v.a;
        if (y == 0) {
            A = std::gcd(A, x);
        } else {
            ExtGcd e = ext_gcd(C, y);
            std::int64_t nb = checked_add(checked_mul(e.s, B), checked_mul(e.t, x));
            std::int64_t other = checked_sub(checked_mul(C / e.g, x), checked_mul(y / e.g, B));
            A = std::gcd(A, other);
            C = e.g;
            B = nb;
        }
        if (A != 0) B = mod_floor(B, A);
    }
};

QuadIdeal to_ideal(const Lat2& L)
{
    if (L.C == 0 || L.A == 0) throw InvalidInput("lattice is not of full rank");
    QuadIdeal I;
    I.c = L.C;
    if (L.A % L.C != 0 || L.B % L.C != 0) throw InvalidInput("lattice is not an ideal");
    I.a = L.A / L.C;
    I.b = mod_floor(L.B / L.C, I.a);
    return I;
}

}  // namespace

bool ideal_less(const QuadIdeal& x, const QuadIdeal& y)
{
    return std::make_tuple(x.norm(), x.c, x.a, x.b) < std::make_tuple(y.norm(), y.c, y.a, y.b);
}

/* ------------------------------------------------------------------ */

QuadField::QuadField(std::int64_t d) : d_(d)
{
    if (d >= 0) throw InvalidInput("only imaginary quadratic fields (d < 0) are supported");
    for (std::int64_t p = 2; p * p <= -d; ++p)
        if ((-d) % (p * p) == 0) throw InvalidInput("d must be squarefree");
    if (mod_floor(d, 4) == 1) {
        disc_ = d;
        tr_ = 1;
        nm_ = (1 - d) / 4;
    } else {
        disc_ = 4 * d;
        tr_ = 0;
        nm_ = -d;
    }
}

QuadInt QuadField::add(const QuadInt& x, const QuadInt& y) const
{
    return {checked_add(x.a, y.a), checked_add(x.b, y.b)};
}

QuadInt QuadField::sub(const QuadInt& x, const QuadInt& y) const
{
    return {checked_sub(x.a, y.a), checked_sub(x.b, y.b)};
}

QuadInt QuadField::mul(const QuadInt& x, const QuadInt& y) const
{
    /* w^2 = tr*w - nm */
    std::int64_t bb = checked_mul(x.b, y.b);
    std::int64_t a = checked_sub(checked_mul(x.a, y.a), checked_mul(bb, nm_));
    std::int64_t b = checked_add(checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.a)),
                                 checked_mul(bb, tr_));
    return {a, b};
}

QuadInt QuadField::conj(const QuadInt& x) const
{
    return {checked_add(x.a, checked_mul(x.b, tr_)), -x.b};
}

std::int64_t QuadField::norm(const QuadInt& x) const
{
    return checked_add(checked_add(checked_mul(x.a, x.a), checked_mul(checked_mul(x.a, x.b), tr_)),
                       checked_mul(checked_mul(x.b, x.b), nm_));
}

std::string QuadField::format(const QuadInt& x) const
{
    if (x.b == 0) return std::to_string(x.a);
    std::string w = x.b == 1 ? "w" : x.b == -1 ? "-w" : std::to_string(x.b) + "*w";
    if (x.a == 0) return w;
    return std::to_string(x.a) + (x.b > 0 ? "+" : "") + w;
}

std::vector<QuadInt> QuadField::elements_of_norm(std::int64_t n) const
{
    std::vector<QuadInt> out;
    if (n < 0) return out;
    if (n == 0) return {QuadInt{0, 0}};
    /* x^2 + tr*x*y + nm*y^2 = n; discriminant in x is disc*y^2 + 4n */
    std::int64_t ymax = isqrt_floor(4 * n / (-disc_));
    for (std::int64_t k = 0; k <= 2 * ymax; ++k) {
        std::int64_t y = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
        std::int64_t D = checked_add(checked_mul(disc_, checked_mul(y, y)), 4 * n);
        if (D < 0) continue;
        std::int64_t s = isqrt_floor(D);
        if (s * s != D) continue;
        for (std::int64_t sign : {1, -1}) {
            if (s == 0 && sign == -1) continue;
            std::int64_t num = -tr_ * y + sign * s;
            if (num % 2 != 0) continue;
            out.push_back({num / 2, y});
        }
    }
    return out;
}

std::vector<QuadInt> QuadField::unit_group() const
{
    auto u = elements_of_norm(1);
    std::sort(u.begin(), u.end());
    return u;
}

std::pair<QuadInt, QuadInt> QuadField::basis(const QuadIdeal& I) const
{
    return {QuadInt{I.c * I.a, 0}, QuadInt{I.c * I.b, I.c}};
}

QuadIdeal QuadField::principal(const QuadInt& x) const
{
    if (x.a == 0 && x.b == 0) throw InvalidInput("the zero ideal is not allowed");
    Lat2 L;
    L.add(x);
    L.add(mul(x, QuadInt{0, 1}));
    return to_ideal(L);
}

QuadIdeal QuadField::ideal_mul(const QuadIdeal& x, const QuadIdeal& y) const
{
    auto [x1, x2] = basis(x);
    auto [y1, y2] = basis(y);
    Lat2 L;
    for (auto const& u : {x1, x2})
        for (auto const& v : {y1, y2}) L.add(mul(u, v));
    return to_ideal(L);
}

QuadIdeal QuadField::ideal_gcd(const QuadIdeal& x, const QuadIdeal& y) const
{
    auto [x1, x2] = basis(x);
    auto [y1, y2] = basis(y);
    Lat2 L;
    for (auto const& u : {x1, x2, y1, y2}) L.add(u);
    return to_ideal(L);
}

QuadIdeal QuadField::ideal_conj(const QuadIdeal& x) const
{
    auto [x1, x2] = basis(x);
    Lat2 L;
    L.add(conj(x1));
    L.add(conj(x2));
    return to_ideal(L);
}

bool QuadField::contains(const QuadIdeal& I, const QuadInt& x) const
{
    std::int64_t C = I.c, B = I.c * I.b, A = I.c * I.a;
    if (x.b % C != 0) return false;
    std::int64_t r = checked_sub(x.a, checked_mul(x.b / C, B));
    return r % A == 0;
}

bool QuadField::divides(const QuadIdeal& x, const QuadIdeal& y) const
{
    auto [y1, y2] = basis(y);
    return contains(x, y1) && contains(x, y2);
}

QuadIdeal QuadField::ideal_div(const QuadIdeal& y, const QuadIdeal& x) const
{
    if (!divides(x, y)) throw InvalidInput("ideal_div: divisor does not divide");
    /* y * conj(x) = y * x^{-1} * N(x) */
    auto [y1, y2] = basis(y);
    auto [c1, c2] = basis(ideal_conj(x));
    std::int64_t n = x.norm();
    Lat2 L;
    for (auto const& u : {y1, y2})
        for (auto const& v : {c1, c2}) {
            QuadInt w = mul(u, v);
            L.add({w.a / n, w.b / n});
        }
    return to_ideal(L);
}

std::vector<QuadIdeal> QuadField::ideals_of_norm(std::int64_t n) const
{
    std::vector<QuadIdeal> out;
    for (std::int64_t c = 1; c * c <= n; ++c) {
        if (n % (c * c) != 0) continue;
        std::int64_t a = n / (c * c);
        for (std::int64_t b = 0; b < a; ++b)
            if (mod_floor(checked_add(checked_add(checked_mul(b, b), checked_mul(b, tr_)), nm_), a) == 0)
                out.push_back({a, b, c});
    }
    std::sort(out.begin(), out.end(), ideal_less);
    return out;
}

std::vector<PrimeAbove> QuadField::primes_above(std::uint64_t p) const
{
    if (!is_prime_u64(p)) throw InvalidInput("primes_above: p must be prime");
    auto P = static_cast<std::int64_t>(p);
    std::vector<PrimeAbove> out;
    auto deg1 = ideals_of_norm(P);
    if (deg1.empty()) {
        out.push_back({QuadIdeal{1, 0, P}, p, 1, 2, Splitting::inert});
    } else if (deg1.size() == 1) {
        out.push_back({deg1[0], p, 2, 1, Splitting::ramified});
    } else {
        for (auto const& I : deg1) out.push_back({I, p, 1, 1, Splitting::split});
    }
    return out;
}

std::vector<std::pair<QuadIdeal, unsigned>> QuadField::factor(const QuadIdeal& I) const
{
    std::vector<std::pair<QuadIdeal, unsigned>> out;
    QuadIdeal rest = I;
    for (auto const& [p, e] : factor_u64(static_cast<std::uint64_t>(I.norm()))) {
        for (auto const& pa : primes_above(p)) {
            unsigned k = 0;
            while (divides(pa.ideal, rest)) {
                rest = ideal_div(rest, pa.ideal);
                ++k;
            }
            if (k) out.emplace_back(pa.ideal, k);
        }
    }
    std::sort(out.begin(), out.end(),
              [](auto const& x, auto const& y) { return ideal_less(x.first, y.first); });
    return out;
}

std::vector<QuadIdeal> QuadField::ideal_divisors(const QuadIdeal& I) const
{
    std::vector<QuadIdeal> out{one()};
    for (auto const& [P, e] : factor(I)) {
        std::size_t base = out.size();
        QuadIdeal pk = one();
        for (unsigned k = 1; k <= e; ++k) {
            pk = ideal_mul(pk, P);
            for (std::size_t i = 0; i < base; ++i) out.push_back(ideal_mul(out[i], pk));
        }
    }
    std::sort(out.begin(), out.end(), ideal_less);
    return out;
}

std::optional<QuadInt> QuadField::is_principal(const QuadIdeal& I) const
{
    for (auto const& x : elements_of_norm(I.norm()))
        if (contains(I, x)) return x;
    return std::nullopt;
}

QuadIdeal QuadField::make_ideal(std::int64_t a, std::int64_t b, std::int64_t c) const
{
    if (a <= 0 || c <= 0) throw InvalidInput("ideal: a and c must be positive");
    if (b < 0 || b >= a) throw InvalidInput("ideal: need 0 <= b < a");
    std::int64_t nb = checked_add(checked_add(checked_mul(b, b), checked_mul(b, tr_)), nm_);
    if (nb % a != 0) throw InvalidInput("ideal: [a, b+w] is not closed under multiplication by w");
    return {a, b, c};
}

QuadIdeal QuadField::parse_ideal(const std::string& text) const
{
    static const std::regex re(R"(\s*\[\s*(\d+)\s*,\s*(\d+)\s*\+\s*w\s*,\s*(\d+)\s*\]\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw InvalidInput("cannot parse ideal '" + text + "'");
    try {
        return make_ideal(std::stoll(m[1]), std::stoll(m[2]), std::stoll(m[3]));
    } catch (const std::out_of_range&) {
        throw InvalidInput("ideal entries out of range");
    }
}

std::string QuadField::format(const QuadIdeal& I)
{
    return "[" + std::to_string(I.a) + ", " + std::to_string(I.b) + "+w, " + std::to_string(I.c) + "]";
}

/* ------------------------------------------------------------------ */

std::vector<BinaryForm> reduced_forms(std::int64_t disc)
{
    if (disc >= 0 || mod_floor(disc, 4) > 1) throw InvalidInput("reduced_forms: bad discriminant");
    std::vector<BinaryForm> out;
    for (std::int64_t a = 1; 3 * a * a <= -disc; ++a)
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            std::int64_t num = b * b - disc;
            if (num % (4 * a) != 0) continue;
            std::int64_t c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && a == c) continue;
            out.push_back({a, b, c});
        }
    return out;
}

ClassGroup::ClassGroup(const QuadField& K) : K_(K)
{
    for (auto const& f : reduced_forms(K.disc())) {
        /* (a, b, c) <-> [a, (-b + sqrt(disc))/2] */
        std::int64_t shift = (K.trace_w() == 1) ? (f.b + 1) / 2 : f.b / 2;
        reps_.push_back(K.make_ideal(f.a, mod_floor(-shift, f.a), 1));
    }
    for (auto const& r : reps_) conj_reps_.push_back(K.ideal_conj(r));
    table_.assign(reps_.size(), std::vector<std::size_t>(reps_.size()));
    for (std::size_t i = 0; i < reps_.size(); ++i)
        for (std::size_t j = 0; j < reps_.size(); ++j)
            table_[i][j] = index_of(K.ideal_mul(reps_[i], reps_[j]));
}

std::size_t ClassGroup::index_of(const QuadIdeal& I) const
{
    for (std::size_t k = 0; k < reps_.size(); ++k)
        if (K_.is_principal(K_.ideal_mul(I, conj_reps_[k]))) return k;
    throw PreconditionFailed("class_group: ideal matches no reduced form");
}

/* ------------------------------------------------------------------ */

ResidueRing::ResidueRing(const QuadField& K, const QuadIdeal& m, const Bounds& bounds)
    : K_(K), m_(m), A_(m.c * m.a), B_(m.c * m.b), C_(m.c)
{
    if (static_cast<std::uint64_t>(m.norm()) > bounds.residue_norm)
        throw BoundExceeded("residue ring of norm " + std::to_string(m.norm()) +
                            " exceeds the configured bound");
    for (auto const& [P, e] : K.factor(m)) primes_.push_back(P);
}

std::size_t ResidueRing::index(const QuadInt& x) const
{
    std::int64_t y = mod_floor(x.b, C_);
    std::int64_t k = (x.b - y) / C_;
    std::int64_t r = mod_floor(checked_sub(x.a, checked_mul(k, B_)), A_);
    return static_cast<std::size_t>(y * A_ + r);
}

QuadInt ResidueRing::element(std::size_t idx) const
{
    auto i = static_cast<std::int64_t>(idx);
    return {i % A_, i / A_};
}

std::size_t ResidueRing::mul(std::size_t i, std::size_t j) const
{
    return index(K_.mul(element(i), element(j)));
}

bool ResidueRing::is_unit(std::size_t idx) const
{
    QuadInt x = element(idx);
    for (auto const& P : primes_)
        if (K_.contains(P, x)) return false;
    return true;
}

std::vector<std::size_t> ResidueRing::units() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (is_unit(i)) out.push_back(i);
    return out;
}

ResidueUnits residue_units(const QuadField& K, const QuadIdeal& f, const Bounds& bounds)
{
    ResidueRing R(K, f, bounds);
    auto idx = R.units();
    std::vector<std::size_t> pos(R.size(), 0);
    for (std::size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = k;
    ResidueUnits out;
    for (auto i : idx) out.elements.push_back(R.element(i));
    out.table.assign(idx.size(), std::vector<std::size_t>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out.table[i][j] = pos[R.mul(idx[i], idx[j])];
    return out;
}

}  // namespace lf
