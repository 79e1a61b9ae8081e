/* lambda-forge: command-line front end. Every verb parses its flags,
 * calls one library operation and serializes the result. */

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lambda_forge/error.hpp"
#include "lambda_forge/lambda_poly.hpp"
#include "lambda_forge/model_checker.hpp"
#include "lambda_forge/ray_class.hpp"
#include "lambda_forge/witt_periodic.hpp"

using namespace lf;
using Json = nlohmann::ordered_json;

namespace {

/* ---- plumbing ---- */

Json big(const BigInt& x)
{
    if (x.fits_slong_p()) return x.get_si();
    return x.get_str();
}

Json big_row(std::span<const BigInt> v)
{
    Json a = Json::array();
    for (auto const& x : v) a.push_back(big(x));
    return a;
}

Json matrix_json(const IntMatrix& m)
{
    Json a = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) a.push_back(big_row(m.row(r)));
    return a;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::stringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

/* a rational combination of powers of x, in the style of IntPoly::format */
std::string format_rat(const CoeffRing& R, const CoeffRing::RatElem& e)
{
    if (R.is_integers()) return e[0].get_str();
    std::ostringstream out;
    bool first = true;
    for (std::size_t k = e.size(); k-- > 0;) {
        const Rational& a = e[k];
        if (a == 0) continue;
        Rational mag = abs(a);
        if (first) out << (a < 0 ? "-" : "");
        else out << (a < 0 ? " - " : " + ");
        first = false;
        if (k == 0 || mag != 1) out << mag.get_str();
        if (k >= 1) out << 'x';
        if (k >= 2) out << '^' << k;
    }
    return first ? "0" : out.str();
}

enum class Format { json, csv, text };

struct Output {
    std::string format = "";
    bool json_flag = false;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
        cmd->add_flag("--json", json_flag, "same as --format json");
    }
    Format resolve(Format fallback, std::initializer_list<Format> allowed) const
    {
        Format f = fallback;
        if (json_flag) f = Format::json;
        else if (format == "json") f = Format::json;
        else if (format == "csv") f = Format::csv;
        else if (format == "text") f = Format::text;
        for (auto a : allowed)
            if (a == f) return f;
        throw InvalidInput("output format not available for this command");
    }
};

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

/* ---- fields, cycles, supports ---- */

struct FieldArgs {
    std::string field = "Q";
    std::string cycle;
    std::string support = "all";
    bool assert_dense = false;

    void add_to(CLI::App* cmd, bool need_cycle = true)
    {
        cmd->add_option("--field", field, "Q, or d:<negative squarefree d>");
        auto* c = cmd->add_option("--cycle", cycle, "\"12*inf\" or \"12\" over Q; \"[a,b+w,c]\" over Q(sqrt d)");
        if (need_cycle) c->required();
        cmd->add_option("--support", support, "all | all-except:<primes> | explicit:<primes>");
        cmd->add_flag("--assert-dense", assert_dense, "treat an explicit support as Chebotarev dense");
    }
};

template <class D>
typename D::Support parse_support(const D& dom, const std::string& s, bool assert_dense)
{
    using Support = typename D::Support;
    if (s == "all") return Support::all();
    auto colon = s.find(':');
    if (colon == std::string::npos) throw InvalidInput("cannot parse support '" + s + "'");
    std::string mode = s.substr(0, colon), list = s.substr(colon + 1);
    /* prime ideals of quadratic fields contain commas */
    char sep = std::is_same_v<D, RationalDomain> ? ',' : ';';
    std::vector<typename D::Ideal> primes;
    for (auto const& item : split(list, sep)) primes.push_back(dom.parse_prime(item));
    if (mode == "all-except") return Support::all_except(primes);
    if (mode == "explicit") return Support::explicit_list(primes, assert_dense);
    throw InvalidInput("unknown support mode '" + mode + "'");
}

template <class D>
std::string format_support(const D& dom, const typename D::Support& P)
{
    if (P.mode == SupportMode::all) return "all";
    std::string s = P.mode == SupportMode::all_except ? "all-except:" : "explicit:";
    char sep = std::is_same_v<D, RationalDomain> ? ',' : ';';
    for (std::size_t i = 0; i < P.primes.size(); ++i) s += (i ? std::string(1, sep) : "") + dom.format(P.primes[i]);
    return s;
}

template <class F>
void with_domain(const std::string& field, F&& body)
{
    if (field == "Q") {
        RationalDomain Q;
        body(Q);
        return;
    }
    if (field.rfind("d:", 0) != 0) throw InvalidInput("unknown field '" + field + "' (expected Q or d:<d>)");
    std::int64_t d;
    try {
        std::size_t used = 0;
        d = std::stoll(field.substr(2), &used);
        if (used != field.size() - 2) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
        throw InvalidInput("cannot parse field '" + field + "'");
    }
    QuadraticDomain K{QuadField(d)};
    body(K);
}

/* ---- verbs ---- */

template <class D>
Json dr_json(const D& dom, const DRMonoid<D>& M)
{
    Json j;
    j["cycle"] = dom.format(M.cycle());
    j["support"] = format_support(dom, M.support());
    Json el = Json::array();
    for (auto const& e : M.elements()) {
        auto const& G = M.part_group(e.part);
        el.push_back({{"d", dom.format(M.divisor_parts()[e.part])}, {"unit_rep", dom.format(G.reps()[e.unit])}});
    }
    j["elements"] = el;
    j["table"] = M.table();
    return j;
}

int cmd_dr_table(const FieldArgs& fa, const Output& o)
{
    auto fmt = o.resolve(Format::csv, {Format::csv, Format::json, Format::text});
    with_domain(fa.field, [&](const auto& dom) {
        using D = std::decay_t<decltype(dom)>;
        DRMonoid<D> M(dom, dom.parse_cycle(fa.cycle), parse_support(dom, fa.support, fa.assert_dense));
        auto const& table = M.table();
        if (fmt == Format::json) {
            emit(dr_json(dom, M));
            return;
        }
        if (fmt == Format::csv) {
            std::cout << "index,d,unit_rep";
            for (std::size_t k = 0; k < M.size(); ++k) std::cout << ",x" << k;
            std::cout << '\n';
        } else {
            std::cout << "DR(" << dom.format(M.cycle()) << ") with " << M.size() << " elements\n";
        }
        for (std::size_t i = 0; i < M.size(); ++i) {
            auto const& e = M.elements()[i];
            std::string d = dom.format(M.divisor_parts()[e.part]);
            std::string u = dom.format(M.part_group(e.part).reps()[e.unit]);
            if (fmt == Format::csv) {
                std::cout << i << ",\"" << d << "\",\"" << u << '"';
                for (auto x : table[i]) std::cout << ',' << x;
            } else {
                std::cout << "  [" << i << "] d = " << d << ", unit " << u << " :";
                for (auto x : table[i]) std::cout << ' ' << x;
            }
            std::cout << '\n';
        }
    });
    return 0;
}

int cmd_dr_mul(const FieldArgs& fa, const std::string& a, const std::string& b, const Output& o)
{
    auto fmt = o.resolve(Format::json, {Format::json, Format::text});
    with_domain(fa.field, [&](const auto& dom) {
        using D = std::decay_t<decltype(dom)>;
        DRMonoid<D> M(dom, dom.parse_cycle(fa.cycle), parse_support(dom, fa.support, fa.assert_dense));
        auto ia = M.classify(dom.parse_ideal(a)), ib = M.classify(dom.parse_ideal(b));
        auto ic = M.mul(ia, ib);
        auto rep = [&](std::size_t i) { return dom.format(M.elements()[i].rep); };
        if (fmt == Format::text) {
            std::cout << "[" << rep(ia) << "] * [" << rep(ib) << "] = [" << rep(ic) << "]\n";
            return;
        }
        Json j;
        j["cycle"] = dom.format(M.cycle());
        j["a"] = {{"index", ia}, {"rep", rep(ia)}};
        j["b"] = {{"index", ib}, {"rep", rep(ib)}};
        j["product"] = {{"index", ic}, {"rep", rep(ic)}};
        emit(j);
    });
    return 0;
}

int cmd_f_equiv(const FieldArgs& fa, const std::string& a, const std::string& b, const Output& o)
{
    auto fmt = o.resolve(Format::text, {Format::json, Format::text});
    with_domain(fa.field, [&](const auto& dom) {
        auto f = dom.parse_cycle(fa.cycle);
        auto P = parse_support(dom, fa.support, fa.assert_dense);
        bool eq = f_equiv(dom, dom.parse_ideal(a), dom.parse_ideal(b), f, P);
        if (fmt == Format::text) {
            std::cout << (eq ? "true" : "false") << '\n';
            return;
        }
        emit({{"a", a}, {"b", b}, {"cycle", dom.format(f)}, {"support", format_support(dom, P)}, {"equivalent", eq}});
    });
    return 0;
}

int cmd_ray_class(const FieldArgs& fa, const Output& o)
{
    auto fmt = o.resolve(Format::json, {Format::json, Format::csv, Format::text});
    with_domain(fa.field, [&](const auto& dom) {
        using D = std::decay_t<decltype(dom)>;
        RayClassGroup<D> G(dom, dom.parse_cycle(fa.cycle), parse_support(dom, fa.support, fa.assert_dense));
        auto const& table = G.table();
        if (fmt == Format::json) {
            Json reps = Json::array();
            for (auto const& r : G.reps()) reps.push_back(dom.format(r));
            emit({{"cycle", dom.format(G.cycle())},
                  {"support", fa.support},
                  {"order", G.order()},
                  {"full_order", G.full_order()},
                  {"reps", reps},
                  {"table", table}});
            return;
        }
        if (fmt == Format::csv) {
            std::cout << "index,rep";
            for (std::size_t k = 0; k < G.order(); ++k) std::cout << ",x" << k;
            std::cout << '\n';
        } else {
            std::cout << "Cl(" << dom.format(G.cycle()) << ") of order " << G.order() << '\n';
        }
        for (std::size_t i = 0; i < G.order(); ++i) {
            if (fmt == Format::csv) std::cout << i << ",\"" << dom.format(G.reps()[i]) << '"';
            else std::cout << "  [" << i << "] " << dom.format(G.reps()[i]) << " :";
            for (auto x : table[i]) std::cout << (fmt == Format::csv ? "," : " ") << x;
            std::cout << '\n';
        }
    });
    return 0;
}

FiniteIdSet parse_id_set(const Json& j)
{
    auto maps = [](const Json& obj) {
        std::map<std::uint64_t, Map> out;
        if (!obj.is_object()) throw InvalidInput("galois/special must be objects");
        for (auto const& [k, v] : obj.items()) {
            std::uint64_t key;
            try {
                std::size_t used = 0;
                key = std::stoull(k, &used);
                if (used != k.size()) throw std::invalid_argument("key");
            } catch (const std::logic_error&) {
                throw InvalidInput("bad key '" + k + "'");
            }
            out[key] = v.get<Map>();
        }
        return out;
    };
    FiniteIdSet s;
    try {
        s.size = j.at("size").get<std::size_t>();
        s.m = j.at("m").get<std::uint64_t>();
        s.galois = maps(j.at("galois"));
        s.special = j.contains("special") ? maps(j.at("special")) : std::map<std::uint64_t, Map>{};
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string("malformed id-set JSON: ") + e.what());
    }
    s.validate();
    return s;
}

int cmd_model_check(const std::string& input, const std::string& cycle, const Output& o)
{
    auto fmt = o.resolve(Format::json, {Format::json, Format::text});
    Json in;
    try {
        if (input == "-") {
            in = Json::parse(std::cin);
        } else {
            std::ifstream f(input);
            if (!f) throw InvalidInput("cannot open '" + input + "'");
            in = Json::parse(f);
        }
    } catch (const Json::parse_error& e) {
        throw InvalidInput(std::string("invalid JSON: ") + e.what());
    }
    auto s = parse_id_set(in);
    RationalDomain Q;
    bool exists = model_exists(s);
    Json j;
    j["exists"] = exists;
    j["minimal_cycle"] = exists ? Json(Q.format(minimal_cycle(s))) : Json(nullptr);
    auto r = compute_r(s);
    j["r"] = r;
    Json cond = Json::object();
    for (auto d : divisors(r)) cond[std::to_string(d)] = Q.format(conductor(s, s.image(d)));
    j["conductors"] = cond;
    if (!cycle.empty()) {
        auto f = Q.parse_cycle(cycle);
        j["cycle"] = Q.format(f);
        j["model_at_cycle"] = decide_model(s, f);
    }
    if (fmt == Format::text) {
        std::cout << "model " << (exists ? "exists" : "does not exist");
        if (exists) std::cout << ", minimal cycle " << j["minimal_cycle"].get<std::string>();
        if (j.contains("model_at_cycle"))
            std::cout << "; at " << cycle << ": " << (j["model_at_cycle"].get<bool>() ? "yes" : "no");
        std::cout << '\n';
        return 0;
    }
    emit(j);
    return 0;
}

int cmd_chebyshev(std::uint64_t n, std::uint64_t mod, const Output& o)
{
    auto fmt = o.resolve(Format::text, {Format::json, Format::csv, Format::text});
    IntPoly p = chebyshev_psi(n);
    if (mod) {
        if (!is_prime_u64(mod)) throw InvalidInput("--mod expects a prime");
        p = p.reduce_mod(BigInt(static_cast<unsigned long>(mod)));
    }
    if (fmt == Format::text) {
        std::cout << p.format() << '\n';
    } else if (fmt == Format::csv) {
        std::cout << "degree,coefficient\n";
        for (std::size_t k = 0; k < p.coeffs().size(); ++k) std::cout << k << ',' << p.coeffs()[k].get_str() << '\n';
    } else {
        Json j{{"n", n}};
        if (mod) j["mod"] = mod;
        j["coefficients"] = big_row(p.coeffs());
        j["polynomial"] = p.format();
        emit(j);
    }
    return 0;
}

int cmd_periodic_locus(const std::string& family, std::uint64_t n, const std::string& cycle, const Output& o)
{
    auto fmt = o.resolve(Format::json, {Format::json, Format::text});
    RationalDomain Q;
    Family fam = parse_family(family);
    PeriodicLocusReport rep;
    if (fam == Family::chebyshev) {
        if (!cycle.empty()) throw InvalidInput("the Chebyshev line takes --n (the cycle is (n))");
        if (n == 0) throw InvalidInput("--n is required");
        rep = chebyshev_image_lattice(n);
    } else {
        if (cycle.empty() == (n == 0)) throw InvalidInput("give exactly one of --n and --cycle");
        rep = toric_periodic_locus(cycle.empty() ? QCycle{n, false} : Q.parse_cycle(cycle));
    }
    if (fmt == Format::text) {
        std::cout << family_name(rep.family) << " line, cycle " << Q.format(rep.cycle) << ": ";
        if (rep.Q) std::cout << "Q = " << rep.Q->format();
        if (rep.exponent) std::cout << "mu_" << *rep.exponent;
        std::cout << ", cokernel order " << rep.cokernel_order.get_str() << '\n';
        return 0;
    }
    Json j;
    j["family"] = family_name(rep.family);
    j["cycle"] = Q.format(rep.cycle);
    if (rep.Q) j["Q"] = big_row(rep.Q->coeffs());
    if (rep.exponent) j["exponent"] = *rep.exponent;
    j["image_basis"] = matrix_json(rep.image_basis);
    j["cokernel_order"] = big(rep.cokernel_order);
    j["injective"] = rep.injective;
    j["matches_stated_basis"] = rep.matches_stated_basis;
    emit(j);
    return 0;
}

/* ---- witt ---- */

struct RingArgs {
    std::string ring = "Z";
    std::string frob;
    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--ring", ring, "Z, or a monic polynomial in x such as \"x^4-1\"");
        cmd->add_option("--frob", frob, "Frobenius lifts: p:x^p (or id on Z)");
    }
    CoeffRing make() const { return CoeffRing::parse(ring, frob); }
};

std::vector<CoeffRing::Elem> parse_elems(const CoeffRing& R, const std::string& list)
{
    std::vector<CoeffRing::Elem> out;
    for (auto const& item : split(list, ',')) out.push_back(R.parse_elem(item));
    return out;
}

/* the first k elements of T: always divisor-closed */
TruncationSet leading(const TruncationSet& T, std::size_t k)
{
    if (k == 0 || k > T.size())
        throw InvalidInput("got " + std::to_string(k) + " values for a truncation set of size " + std::to_string(T.size()));
    return TruncationSet(std::vector<std::uint64_t>(T.elems().begin(), T.elems().begin() + static_cast<std::ptrdiff_t>(k)));
}

bool lifts_available(const CoeffRing& R, const TruncationSet& T)
{
    for (auto p : primes_up_to(T.elems().back()))
        if (!R.has_frobenius(p)) return false;
    return true;
}

int cmd_witt_convert(const RingArgs& ra, const std::string& ghost, const std::string& witt, const std::string& trunc,
                     std::uint64_t bound, const Output& o)
{
    o.resolve(Format::json, {Format::json});
    if (ghost.empty() == witt.empty()) throw InvalidInput("give exactly one of --ghost and --witt");
    CoeffRing R = ra.make();
    TruncationSet T0 = trunc.empty() ? TruncationSet::up_to(bound) : TruncationSet::parse(trunc);
    auto values = parse_elems(R, ghost.empty() ? witt : ghost);
    TruncationSet T = leading(T0, values.size());

    GhostVector g{T, {}};
    Json wj = Json::array(), integral = Json::array();
    if (!ghost.empty()) {
        g.comp = values;
        auto w = witt_from_ghost(R, g);
        for (std::size_t i = 0; i < T.size(); ++i) {
            wj.push_back(format_rat(R, w.coord[i]));
            integral.push_back(static_cast<bool>(w.integral[i]));
        }
    } else {
        WittVector w{T, values};
        g = ghost_from_witt(R, w);
        for (auto const& v : values) {
            wj.push_back(R.format(v));
            integral.push_back(true);
        }
    }
    Json gj = Json::array();
    for (auto const& c : g.comp) gj.push_back(R.format(c));
    Json j;
    j["ring"] = R.describe();
    j["truncation"] = T.elems();
    j["ghost"] = gj;
    j["witt"] = wj;
    j["integral"] = integral;
    j["dwork"] = lifts_available(R, T) ? Json(dwork_check(R, g)) : Json(nullptr);
    emit(j);
    return 0;
}

int cmd_witt_check(const RingArgs& ra, const std::string& ghost, const std::string& trunc, std::uint64_t bound,
                   const Output& o)
{
    o.resolve(Format::json, {Format::json});
    CoeffRing R = ra.make();
    Json primes = Json::array();
    for (auto p : primes_up_to(bound)) {
        R.validate_frobenius(p);
        primes.push_back(p);
    }
    Json j;
    j["ring"] = R.describe();
    j["frobenius"] = ra.frob.empty() ? (R.is_integers() ? "id" : "none") : ra.frob;
    j["primes_checked"] = primes;
    j["lifts_valid"] = true;
    if (!ghost.empty()) {
        TruncationSet T0 = trunc.empty() ? TruncationSet::up_to(bound) : TruncationSet::parse(trunc);
        auto values = parse_elems(R, ghost);
        GhostVector g{leading(T0, values.size()), values};
        j["truncation"] = g.T.elems();
        j["dwork"] = dwork_check(R, g);
        j["integral"] = ghost_is_integral(R, g);
    }
    emit(j);
    return 0;
}

int cmd_witt_periodic(const RingArgs& ra, std::uint64_t n, std::uint64_t bound, const Output& o)
{
    o.resolve(Format::json, {Format::json});
    CoeffRing R = ra.make();
    auto L = periodic_witt_lattice(n, R, bound);
    emit({{"n", L.n},
          {"bound", L.bound},
          {"ring", R.describe()},
          {"rank", L.rank()},
          {"basis", matrix_json(L.basis)},
          {"stable", L.stable}});
    return 0;
}

int cmd_witt_iso(std::uint64_t n, std::uint64_t bound, const Output& o)
{
    o.resolve(Format::json, {Format::json});
    auto r = ray_class_algebra_witt_iso_report(n, bound);
    emit({{"n", r.n},
          {"bound", r.bound},
          {"image_rank", r.image_rank},
          {"injective", r.injective},
          {"teichmuller_integral", r.teichmuller_integral},
          {"image_in_group_ring_lattice", r.image_in_group_ring_lattice},
          {"group_ring_lattice_rank", r.group_ring_lattice_rank},
          {"index", big(r.index)},
          {"cosets_passing", r.cosets_passing},
          {"cosets_passing_half", r.cosets_passing_half},
          {"stable", r.stable},
          {"equal", r.equal},
          {"verdict", verdict_name(r.verdict)}});
    return 0;
}

int cmd_witt_fields(std::uint64_t n, const Output& o)
{
    o.resolve(Format::json, {Format::json});
    auto r = periodic_witt_field_product_report(n);
    emit({{"n", r.n},
          {"dimension", r.dimension},
          {"idempotents", r.idempotents},
          {"factor_dims", r.factor_dims},
          {"orthogonal_complete", r.orthogonal_complete},
          {"ok", r.ok}});
    return 0;
}

int cmd_cotangent(std::uint64_t a, std::uint64_t q, const Output& o)
{
    auto fmt = o.resolve(Format::json, {Format::json, Format::text});
    auto r = cyclotomic_cotangent(a);
    if (fmt == Format::text) {
        std::cout << "I/I^2 for Z[x]/(x^" << a << " - 1):";
        if (r.torsion.empty() && r.free_rank == 0) std::cout << " 0";
        for (auto const& t : r.torsion) std::cout << " Z/" << t.get_str();
        if (r.free_rank) std::cout << " Z^" << r.free_rank;
        if (q) std::cout << "; dimension over F_" << q << ": " << cyclotomic_cotangent_dim(a, q);
        std::cout << '\n';
        return 0;
    }
    Json j{{"a", a}, {"torsion", big_row(r.torsion)}, {"free_rank", r.free_rank}};
    if (q) {
        j["q"] = q;
        j["dim"] = cyclotomic_cotangent_dim(a, q);
    }
    emit(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"lambda-forge: ray class monoids, Lambda-models, periodic loci and periodic Witt vectors"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    FieldArgs fa;
    Output out;
    std::string a, b, input, cycle, family, ghost, witt, trunc;
    std::uint64_t n = 0, mod = 0, q = 0, aa = 0, bound = 64;
    RingArgs ra;
    int status = 0;

    auto* dr_table = app.add_subcommand("dr-table", "multiplication table of DR_P(f)");
    fa.add_to(dr_table);
    out.add_to(dr_table);

    auto* dr_mul = app.add_subcommand("dr-mul", "product of two classes in DR_P(f)");
    fa.add_to(dr_mul);
    dr_mul->add_option("--a", a)->required();
    dr_mul->add_option("--b", b)->required();
    out.add_to(dr_mul);

    auto* fe = app.add_subcommand("f-equiv", "are two ideals f-equivalent");
    fa.add_to(fe);
    fe->add_option("--a", a)->required();
    fe->add_option("--b", b)->required();
    out.add_to(fe);

    auto* rc = app.add_subcommand("ray-class", "the ray class group Cl_P(f)");
    fa.add_to(rc);
    out.add_to(rc);

    auto* mc = app.add_subcommand("model-check", "integral Lambda-models of a finite Id-set");
    mc->add_option("--input", input, "JSON file, or - for stdin")->required();
    mc->add_option("--cycle", cycle, "also decide whether a model over this cycle exists");
    out.add_to(mc);

    auto* ch = app.add_subcommand("chebyshev", "the Chebyshev polynomial psi_n");
    ch->add_option("--n", n)->required();
    ch->add_option("--mod", mod, "reduce the coefficients mod a prime");
    out.add_to(ch);

    auto* pl = app.add_subcommand("periodic-locus", "periodic loci of the toric and Chebyshev lines");
    pl->add_option("--family", family)->required()->check(CLI::IsMember({"toric", "chebyshev"}));
    pl->add_option("--n", n);
    pl->add_option("--cycle", cycle, "toric line only");
    out.add_to(pl);

    auto* wt = app.add_subcommand("witt", "big Witt vectors");
    wt->require_subcommand(1);
    auto* wconv = wt->add_subcommand("convert", "ghost components <-> Witt coordinates");
    ra.add_to(wconv);
    wconv->add_option("--ghost", ghost, "comma separated ghost components");
    wconv->add_option("--witt", witt, "comma separated Witt coordinates");
    wconv->add_option("--trunc", trunc, "div:<n>, upto:<B> or a list; default upto:<bound>");
    wconv->add_option("--bound", bound, "B for the default truncation {1..B}");
    out.add_to(wconv);
    auto* wcheck = wt->add_subcommand("check", "validate Frobenius lifts and optionally a ghost vector");
    ra.add_to(wcheck);
    wcheck->add_option("--ghost", ghost);
    wcheck->add_option("--trunc", trunc);
    wcheck->add_option("--bound", bound, "check lifts at primes up to B");
    out.add_to(wcheck);
    auto* wper = wt->add_subcommand("periodic", "the periodic Witt lattice for f = n*inf");
    ra.add_to(wper);
    wper->add_option("--n", n)->required();
    wper->add_option("--bound", bound);
    out.add_to(wper);
    auto* wiso = wt->add_subcommand("iso", "Z[x]/(x^n - 1) against periodic Witt vectors");
    wiso->add_option("--n", n)->required();
    wiso->add_option("--bound", bound);
    out.add_to(wiso);
    auto* wfields = wt->add_subcommand("fields", "idempotents of the rational periodic Witt algebra");
    wfields->add_option("--n", n)->required();
    out.add_to(wfields);

    auto* co = app.add_subcommand("cotangent", "I/I^2 for the augmentation ideal of Z[x]/(x^a - 1)");
    co->add_option("--a", aa)->required();
    co->add_option("--q", q, "also report the dimension over F_q");
    out.add_to(co);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc_ = app.exit(e);
        return rc_ == 0 ? 0 : 1;
    }

    try {
        if (*dr_table) status = cmd_dr_table(fa, out);
        else if (*dr_mul) status = cmd_dr_mul(fa, a, b, out);
        else if (*fe) status = cmd_f_equiv(fa, a, b, out);
        else if (*rc) status = cmd_ray_class(fa, out);
        else if (*mc) status = cmd_model_check(input, cycle, out);
        else if (*ch) status = cmd_chebyshev(n, mod, out);
        else if (*pl) status = cmd_periodic_locus(family, n, cycle, out);
        else if (*wconv) status = cmd_witt_convert(ra, ghost, witt, trunc, bound, out);
        else if (*wcheck) status = cmd_witt_check(ra, ghost, trunc, bound, out);
        else if (*wper) status = cmd_witt_periodic(ra, n, bound, out);
        else if (*wiso) status = cmd_witt_iso(n, bound, out);
        else if (*wfields) status = cmd_witt_fields(n, out);
        else if (*co) status = cmd_cotangent(aa, q, out);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Refusal& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return status;
}
