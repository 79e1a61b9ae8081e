#include "lambda_forge/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "lambda_forge/error.hpp"

namespace lf {

namespace {

using RatPoly = std::vector<Rational>;

void trim_rat(RatPoly& p)
{
    while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly rat_mod(RatPoly a, const RatPoly& b)
{
    trim_rat(a);
    while (a.size() >= b.size()) {
        Rational q = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        trim_rat(a);
    }
    return a;
}

}  // namespace

/* ---------------------------------------------------------------- */

IntPoly::IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::constant(const BigInt& c) { return IntPoly(std::vector<BigInt>{c}); }

IntPoly IntPoly::monomial(std::size_t k, const BigInt& c)
{
    std::vector<BigInt> v(k + 1);
    v[k] = c;
    return IntPoly(std::move(v));
}

IntPoly IntPoly::from_i64(const std::vector<std::int64_t>& coeffs)
{
    std::vector<BigInt> v;
    for (auto x : coeffs) v.emplace_back(static_cast<long>(x));
    return IntPoly(std::move(v));
}

void IntPoly::trim()
{
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPoly IntPoly::operator+(const IntPoly& o) const
{
    std::vector<BigInt> r(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator-() const
{
    std::vector<BigInt> r(c_);
    for (auto& x : r) x = -x;
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator-(const IntPoly& o) const { return *this + (-o); }

IntPoly IntPoly::operator*(const IntPoly& o) const
{
    if (is_zero() || o.is_zero()) return {};
    std::vector<BigInt> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator*(const BigInt& s) const
{
    std::vector<BigInt> r(c_);
    for (auto& x : r) x *= s;
    return IntPoly(std::move(r));
}

IntPoly IntPoly::derivative() const
{
    std::vector<BigInt> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * static_cast<unsigned long>(i));
    return IntPoly(std::move(r));
}

IntPoly IntPoly::reduce_mod(const BigInt& p) const
{
    if (p <= 0) throw InvalidInput("modulus must be positive");
    std::vector<BigInt> r(c_);
    for (auto& x : r) {
        x %= p;
        if (x < 0) x += p;
    }
    return IntPoly(std::move(r));
}

std::string IntPoly::format(const std::string& var) const
{
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t k = c_.size(); k-- > 0;) {
        const BigInt& a = c_[k];
        if (a == 0) continue;
        BigInt mag = abs(a);
        if (first) out << (a < 0 ? "-" : "");
        else out << (a < 0 ? " - " : " + ");
        first = false;
        if (k == 0 || mag != 1) out << mag.get_str();
        if (k >= 1) out << var;
        if (k >= 2) out << '^' << k;
    }
    return out.str();
}

IntPoly parse_int_poly(const std::string& text, char var)
{
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw InvalidInput("empty polynomial");
    IntPoly out;
    std::size_t i = 0;
    auto digits = [&](std::size_t& j) {
        std::size_t start = j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        return s.substr(start, j - start);
    };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            throw InvalidInput("malformed polynomial '" + text + "'");
        }
        std::string coef = digits(i);
        std::size_t exp = 0;
        if (i < s.size() && s[i] == '*') {
            if (coef.empty()) throw InvalidInput("malformed polynomial '" + text + "'");
            ++i;
            if (i >= s.size() || s[i] != var) throw InvalidInput("malformed polynomial '" + text + "'");
        }
        if (i < s.size() && s[i] == var) {
            ++i;
            exp = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                auto e = digits(i);
                if (e.empty() || e.size() > 6) throw InvalidInput("bad exponent in '" + text + "'");
                exp = std::stoul(e);
            }
        } else if (coef.empty()) {
            throw InvalidInput("malformed polynomial '" + text + "'");
        }
        BigInt c = coef.empty() ? BigInt(1) : BigInt(coef);
        out = out + IntPoly::monomial(exp, sign * c);
    }
    return out;
}

IntPoly compose(const IntPoly& f, const IntPoly& g)
{
    IntPoly r;
    for (std::size_t k = f.coeffs().size(); k-- > 0;) r = r * g + IntPoly::constant(f.coeffs()[k]);
    return r;
}

std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& b)
{
    if (b.is_zero() || abs(b.leading()) != 1) throw InvalidInput("divisor must have leading coefficient +-1");
    std::vector<BigInt> r = a.coeffs();
    const auto& bc = b.coeffs();
    const std::size_t db = bc.size() - 1;
    std::vector<BigInt> q(r.size() > db ? r.size() - db : 0);
    for (std::size_t k = r.size(); k-- > db;) {
        if (r[k] == 0) continue;
        BigInt t = r[k] * b.leading();  // leading is its own inverse
        q[k - db] = t;
        for (std::size_t i = 0; i <= db; ++i) r[k - db + i] -= t * bc[i];
    }
    return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

bool divides_monic(const IntPoly& b, const IntPoly& a) { return divmod_monic(a, b).second.is_zero(); }

IntPoly monic_gcd(const IntPoly& a, const IntPoly& b)
{
    RatPoly x(a.coeffs().begin(), a.coeffs().end()), y(b.coeffs().begin(), b.coeffs().end());
    trim_rat(x);
    trim_rat(y);
    while (!y.empty()) {
        auto r = rat_mod(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    if (x.empty()) return {};
    Rational lead = x.back();
    std::vector<BigInt> out;
    for (auto& c : x) {
        c /= lead;
        if (c.get_den() != 1) throw InvalidInput("gcd is not integral; inputs must be monic");
        out.push_back(c.get_num());
    }
    return IntPoly(std::move(out));
}

IntPoly squarefree_part(const IntPoly& f)
{
    if (f.is_zero() || f.leading() != 1) throw InvalidInput("squarefree_part expects a monic polynomial");
    auto g = monic_gcd(f, f.derivative());
    if (g.is_zero()) return f;
    return divmod_monic(f, g).first;
}

bool is_squarefree(const IntPoly& f) { return monic_gcd(f, f.derivative()).degree() <= 0; }

/* ---------------------------------------------------------------- */

LaurentPoly::LaurentPoly(std::int64_t low, std::vector<BigInt> coeffs) : low_(low), c_(std::move(coeffs)) { trim(); }

LaurentPoly LaurentPoly::monomial(std::int64_t k, const BigInt& c) { return LaurentPoly(k, {c}); }

LaurentPoly LaurentPoly::from_poly(const IntPoly& p) { return LaurentPoly(0, p.coeffs()); }

void LaurentPoly::trim()
{
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
    low_ = c_.empty() ? 0 : low_ + static_cast<std::int64_t>(lead);
}

BigInt LaurentPoly::coeff(std::int64_t k) const
{
    if (k < low_ || k > high()) return 0;
    return c_[static_cast<std::size_t>(k - low_)];
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const
{
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    std::int64_t lo = std::min(low_, o.low_), hi = std::max(high(), o.high());
    std::vector<BigInt> r(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t k = lo; k <= hi; ++k) r[static_cast<std::size_t>(k - lo)] = coeff(k) + o.coeff(k);
    return LaurentPoly(lo, std::move(r));
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const
{
    std::vector<BigInt> neg(o.c_);
    for (auto& x : neg) x = -x;
    return *this + LaurentPoly(o.low_, std::move(neg));
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const
{
    if (is_zero() || o.is_zero()) return {};
    std::vector<BigInt> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return LaurentPoly(low_ + o.low_, std::move(r));
}

LaurentPoly LaurentPoly::substitute_power(std::int64_t a) const
{
    if (a == 0) throw InvalidInput("exponent must be nonzero");
    LaurentPoly r;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) r = r + monomial((low_ + static_cast<std::int64_t>(i)) * a, c_[i]);
    return r;
}

bool LaurentPoly::associate(const LaurentPoly& o) const
{
    if (c_.size() != o.c_.size()) return false;
    if (c_ == o.c_) return true;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != -o.c_[i]) return false;
    return true;
}

std::string LaurentPoly::format(const std::string& var) const
{
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        const BigInt& a = c_[i];
        if (a == 0) continue;
        std::int64_t k = low_ + static_cast<std::int64_t>(i);
        BigInt mag = abs(a);
        if (first) out << (a < 0 ? "-" : "");
        else out << (a < 0 ? " - " : " + ");
        first = false;
        if (k == 0 || mag != 1) out << mag.get_str();
        if (k != 0) out << var;
        if (k != 0 && k != 1) out << '^' << k;
    }
    return out.str();
}

LaurentPoly substitute_x_plus_inverse(const IntPoly& f)
{
    const LaurentPoly y(-1, {1, 0, 1});
    LaurentPoly r;
    for (std::size_t k = f.coeffs().size(); k-- > 0;) r = r * y + LaurentPoly::monomial(0, f.coeffs()[k]);
    return r;
}

/* ---------------------------------------------------------------- */

GroupRingElt GroupRingElt::zero(std::size_t n)
{
    if (n == 0) throw InvalidInput("group ring order must be positive");
    return {n, std::vector<BigInt>(n)};
}

GroupRingElt GroupRingElt::monomial(std::size_t n, std::int64_t k, const BigInt& coeff)
{
    auto e = zero(n);
    e.c[static_cast<std::size_t>(mod_floor(k, static_cast<std::int64_t>(n)))] = coeff;
    return e;
}

GroupRingElt GroupRingElt::from_laurent(std::size_t n, const LaurentPoly& p)
{
    auto e = zero(n);
    for (std::size_t i = 0; i < p.coeffs().size(); ++i)
        e.c[static_cast<std::size_t>(mod_floor(p.low() + static_cast<std::int64_t>(i), static_cast<std::int64_t>(n)))] += p.coeffs()[i];
    return e;
}

GroupRingElt GroupRingElt::operator+(const GroupRingElt& o) const
{
    if (n != o.n) throw InvalidInput("group ring orders differ");
    GroupRingElt r = *this;
    for (std::size_t i = 0; i < n; ++i) r.c[i] += o.c[i];
    return r;
}

GroupRingElt GroupRingElt::operator-(const GroupRingElt& o) const
{
    if (n != o.n) throw InvalidInput("group ring orders differ");
    GroupRingElt r = *this;
    for (std::size_t i = 0; i < n; ++i) r.c[i] -= o.c[i];
    return r;
}

GroupRingElt GroupRingElt::operator*(const GroupRingElt& o) const
{
    if (n != o.n) throw InvalidInput("group ring orders differ");
    auto r = zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (c[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) r.c[(i + j) % n] += c[i] * o.c[j];
    }
    return r;
}

GroupRingElt GroupRingElt::sigma() const
{
    auto r = zero(n);
    for (std::size_t i = 0; i < n; ++i) r.c[(n - i) % n] = c[i];
    return r;
}

bool GroupRingElt::is_zero() const
{
    return std::all_of(c.begin(), c.end(), [](const BigInt& x) { return x == 0; });
}

GroupRingElt evaluate(const IntPoly& p, const GroupRingElt& e)
{
    auto r = GroupRingElt::zero(e.n);
    for (std::size_t k = p.coeffs().size(); k-- > 0;) r = r * e + GroupRingElt::monomial(e.n, 0, p.coeffs()[k]);
    return r;
}

}  // namespace lf
