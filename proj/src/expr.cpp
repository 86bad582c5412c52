#include "dirac/expr.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "dirac/error.hpp"

namespace dirac {

// ---------------------------------------------------------------- monomials

int Monomial::deg() const {
    int d = 0;
    for (auto& [v, e] : f) d += e;
    return d;
}

bool Monomial::divides(const Monomial& other) const {
    // this | other
    std::size_t j = 0;
    for (auto& [v, e] : f) {
        while (j < other.f.size() && other.f[j].first != v) ++j;
        if (j == other.f.size() || other.f[j].second < e) return false;
    }
    return true;
}

bool Monomial::contains(int symbol) const {
    for (auto& [v, e] : f)
        if (v == symbol) return true;
    return false;
}

int Monomial::exponent(int symbol) const {
    for (auto& [v, e] : f)
        if (v == symbol) return e;
    return 0;
}

namespace {
bool var_less(int a, int b) { return sym_key(a) < sym_key(b); }
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.f.reserve(a.f.size() + b.f.size());
    std::size_t i = 0, j = 0;
    while (i < a.f.size() && j < b.f.size()) {
        if (a.f[i].first == b.f[j].first) {
            r.f.emplace_back(a.f[i].first, a.f[i].second + b.f[j].second);
            ++i; ++j;
        } else if (var_less(a.f[i].first, b.f[j].first)) {
            r.f.push_back(a.f[i++]);
        } else {
            r.f.push_back(b.f[j++]);
        }
    }
    while (i < a.f.size()) r.f.push_back(a.f[i++]);
    while (j < b.f.size()) r.f.push_back(b.f[j++]);
    return r;
}

Monomial mono_div(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t j = 0;
    for (auto& [v, e] : a.f) {
        int sub = 0;
        if (j < b.f.size() && b.f[j].first == v) {
            sub = b.f[j].second;
            ++j;
        }
        if (e - sub > 0) r.f.emplace_back(v, e - sub);
    }
    return r;
}

Monomial mono_gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < a.f.size() && j < b.f.size()) {
        if (a.f[i].first == b.f[j].first) {
            r.f.emplace_back(a.f[i].first, std::min(a.f[i].second, b.f[j].second));
            ++i; ++j;
        } else if (var_less(a.f[i].first, b.f[j].first)) {
            ++i;
        } else {
            ++j;
        }
    }
    return r;
}

int mono_cmp(const Monomial& a, const Monomial& b) {
    int da = a.deg(), db = b.deg();
    if (da != db) return da < db ? -1 : 1;
    std::size_t i = 0, j = 0;
    while (i < a.f.size() && j < b.f.size()) {
        auto ka = sym_key(a.f[i].first), kb = sym_key(b.f[j].first);
        if (ka != kb) return ka < kb ? 1 : -1;  // greater variable present wins
        if (a.f[i].second != b.f[j].second)
            return a.f[i].second > b.f[j].second ? 1 : -1;
        ++i; ++j;
    }
    if (i < a.f.size()) return 1;
    if (j < b.f.size()) return -1;
    return 0;
}

// ------------------------------------------------------------- polynomials

bool Poly::is_constant() const {
    return t.empty() || (t.size() == 1 && t[0].first.f.empty());
}

int Poly::deg() const {
    int d = 0;
    for (auto& [m, c] : t) d = std::max(d, m.deg());
    return d;
}

Poly Poly::constant(const Rat& c) {
    Poly p;
    if (c != 0) p.t.emplace_back(Monomial{}, c);
    return p;
}

Poly Poly::variable(int symbol) {
    Poly p;
    Monomial m;
    m.f.emplace_back(symbol, 1);
    p.t.emplace_back(std::move(m), Rat(1));
    return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r;
    r.t.reserve(a.t.size() + b.t.size());
    std::size_t i = 0, j = 0;
    while (i < a.t.size() && j < b.t.size()) {
        int c = mono_cmp(a.t[i].first, b.t[j].first);
        if (c == 0) {
            Rat s = a.t[i].second + b.t[j].second;
            if (s != 0) r.t.emplace_back(a.t[i].first, std::move(s));
            ++i; ++j;
        } else if (c > 0) {
            r.t.push_back(a.t[i++]);
        } else {
            r.t.push_back(b.t[j++]);
        }
    }
    while (i < a.t.size()) r.t.push_back(a.t[i++]);
    while (j < b.t.size()) r.t.push_back(b.t[j++]);
    return r;
}

Poly poly_neg(const Poly& a) {
    Poly r = a;
    for (auto& [m, c] : r.t) c = -c;
    return r;
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

Poly poly_mul_term(const Poly& a, const Monomial& m, const Rat& c) {
    Poly r;
    if (c == 0) return r;
    r.t.reserve(a.t.size());
    for (auto& [am, ac] : a.t) r.t.emplace_back(mono_mul(am, m), ac * c);
    // multiplying by a fixed monomial preserves the term order
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.t.empty() || b.t.empty()) return {};
    struct MonoGt {
        bool operator()(const Monomial& x, const Monomial& y) const { return mono_cmp(x, y) > 0; }
    };
    std::map<Monomial, Rat, MonoGt> acc;
    for (auto& [am, ac] : a.t)
        for (auto& [bm, bc] : b.t) {
            auto m = mono_mul(am, bm);
            auto it = acc.find(m);
            if (it == acc.end()) acc.emplace(std::move(m), ac * bc);
            else {
                it->second += ac * bc;
                if (it->second == 0) acc.erase(it);
            }
        }
    Poly r;
    r.t.reserve(acc.size());
    for (auto& [m, c] : acc) r.t.emplace_back(m, c);
    return r;
}

Poly poly_scale(const Poly& a, const Rat& c) {
    if (c == 0) return {};
    Poly r = a;
    for (auto& [m, cc] : r.t) cc *= c;
    return r;
}

bool poly_divexact(const Poly& a, const Poly& b, Poly& quot) {
    if (b.is_zero()) return false;
    Poly rem = a;
    Poly q;
    while (!rem.is_zero()) {
        if (!b.lead_mono().divides(rem.lead_mono())) return false;
        Monomial m = mono_div(rem.lead_mono(), b.lead_mono());
        Rat c = rem.lead_coeff() / b.lead_coeff();
        Poly term;
        term.t.emplace_back(m, c);
        q = poly_add(q, term);
        rem = poly_sub(rem, poly_mul_term(b, m, c));
    }
    quot = std::move(q);
    return true;
}

void poly_vars(const Poly& a, std::set<int>& out) {
    for (auto& [m, c] : a.t)
        for (auto& [v, e] : m.f) out.insert(v);
}

Poly poly_radical_rewrite(const Poly& a, const std::set<int>& rads) {
    if (rads.empty()) return a;
    std::map<int, std::pair<int, int>> base_to_rad;  // base -> (radical, deg)
    for (int r : rads) {
        const SymInfo& info = sym_info(r);
        auto it = base_to_rad.find(info.radical_base);
        if (it == base_to_rad.end()) {
            base_to_rad[info.radical_base] = {r, info.radical_deg};
        } else if (it->second.second != info.radical_deg) {
            int l = std::lcm(it->second.second, info.radical_deg);
            it->second = {sym_radical(info.radical_base, l), l};
        }
    }
    // Rewrite both plain bases and lower-degree radicals of the same base.
    Poly acc;
    for (auto& [m, c] : a.t) {
        Monomial nm;
        bool changed = false;
        for (auto& [v, e] : m.f) {
            const SymInfo& vi = sym_info(v);
            int target = -1, mult = 0;
            if (auto it = base_to_rad.find(v); it != base_to_rad.end()) {
                target = it->second.first;
                mult = it->second.second;
            } else if (vi.kind == SymKind::Radical) {
                if (auto it2 = base_to_rad.find(vi.radical_base);
                    it2 != base_to_rad.end() && it2->second.first != v) {
                    target = it2->second.first;
                    mult = it2->second.second / vi.radical_deg;
                }
            }
            if (target >= 0 && target != v) {
                Monomial one;
                one.f.emplace_back(target, e * mult);
                nm = mono_mul(nm, one);
                changed = true;
            } else {
                Monomial one;
                one.f.emplace_back(v, e);
                nm = mono_mul(nm, one);
            }
        }
        (void)changed;
        Poly term;
        term.t.emplace_back(std::move(nm), c);
        acc = poly_add(acc, term);
    }
    return acc;
}

std::string poly_str(const Poly& a) {
    if (a.t.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [m, c] : a.t) {
        Rat ac = c;
        bool neg = c < 0;
        if (neg) ac = -ac;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        std::string coeff;
        Int num = boost::multiprecision::numerator(ac);
        Int den = boost::multiprecision::denominator(ac);
        if (den == 1) coeff = num.str();
        else coeff = "(" + num.str() + "/" + den.str() + ")";
        if (m.f.empty()) {
            out += coeff;
            continue;
        }
        if (ac != 1) out += coeff + "*";
        bool ffirst = true;
        for (auto& [v, e] : m.f) {
            if (!ffirst) out += "*";
            ffirst = false;
            out += sym_info(v).name;
            if (e != 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

// ------------------------------------------------------ rational functions

namespace {

using RF = std::pair<Poly, Poly>;  // num, den

const std::shared_ptr<const RF>& shared_zero() {
    static auto z = std::make_shared<const RF>(Poly::zero(), Poly::constant(1));
    return z;
}

std::set<int> collect_radicals(const Poly& p) {
    std::set<int> vars, rads;
    poly_vars(p, vars);
    for (int v : vars)
        if (sym_info(v).kind == SymKind::Radical) rads.insert(v);
    return rads;
}

std::shared_ptr<const RF> make_rf(Poly num, Poly den) {
    if (den.is_zero()) throw DivisionByZero();
    // Unify radical representations: wherever a radical over some base is in
    // play, the base itself (and coarser radicals of it) must not appear.
    std::set<int> rads = collect_radicals(num);
    for (int r : collect_radicals(den)) rads.insert(r);
    if (!rads.empty()) {
        num = poly_radical_rewrite(num, rads);
        den = poly_radical_rewrite(den, rads);
    }
    if (num.is_zero()) return shared_zero();
    // Cancel the common monomial content.
    Monomial g = num.t[0].first;
    for (auto& [m, c] : num.t) g = mono_gcd(g, m);
    for (auto& [m, c] : den.t) g = mono_gcd(g, m);
    if (!g.f.empty()) {
        for (auto& [m, c] : num.t) m = mono_div(m, g);
        for (auto& [m, c] : den.t) m = mono_div(m, g);
        std::sort(num.t.begin(), num.t.end(),
                  [](auto& x, auto& y) { return mono_cmp(x.first, y.first) > 0; });
        std::sort(den.t.begin(), den.t.end(),
                  [](auto& x, auto& y) { return mono_cmp(x.first, y.first) > 0; });
    }
    if (den.is_constant()) {
        num = poly_scale(num, Rat(1) / den.lead_coeff());
        den = Poly::constant(1);
    } else {
        Poly q;
        if (poly_divexact(num, den, q)) {
            num = std::move(q);
            den = Poly::constant(1);
        } else if (poly_divexact(den, num, q)) {
            num = Poly::constant(1);
            den = std::move(q);
            if (den.is_constant()) {
                num = Poly::constant(Rat(1) / den.lead_coeff());
                den = Poly::constant(1);
            }
        }
        if (!den.is_constant()) {
            Rat lc = den.lead_coeff();
            if (lc != 1) {
                num = poly_scale(num, Rat(1) / lc);
                den = poly_scale(den, Rat(1) / lc);
            }
        }
    }
    return std::make_shared<const RF>(std::move(num), std::move(den));
}

} // namespace

Expr::Expr() : p_(shared_zero()) {}

Expr Expr::integer(long v) { return rational(Rat(v)); }

Expr Expr::rational(const Rat& v) {
    return Expr(make_rf(Poly::constant(v), Poly::constant(1)));
}

Expr Expr::symbol(int id) {
    return Expr(make_rf(Poly::variable(id), Poly::constant(1)));
}

Expr Expr::symbol(const std::string& name) {
    int id = sym_lookup(name);
    if (id < 0) throw UndeclaredSymbol(name);
    return symbol(id);
}

Expr Expr::make(Poly num, Poly den) {
    return Expr(make_rf(std::move(num), std::move(den)));
}

const Poly& Expr::num() const { return p_->first; }
const Poly& Expr::den() const { return p_->second; }

Expr Expr::operator+(const Expr& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    return Expr(make_rf(poly_add(poly_mul(num(), o.den()), poly_mul(o.num(), den())),
                        poly_mul(den(), o.den())));
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator-() const {
    if (is_zero()) return *this;
    return Expr(make_rf(poly_neg(num()), den()));
}

Expr Expr::operator*(const Expr& o) const {
    if (is_zero() || o.is_zero()) return Expr();
    return Expr(make_rf(poly_mul(num(), o.num()), poly_mul(den(), o.den())));
}

Expr Expr::operator/(const Expr& o) const {
    if (o.is_zero()) throw DivisionByZero("division by zero expression");
    if (is_zero()) return Expr();
    return Expr(make_rf(poly_mul(num(), o.den()), poly_mul(den(), o.num())));
}

Expr Expr::pow(long e) const {
    if (e == 0) return Expr::integer(1);
    if (e < 0) return Expr::integer(1) / pow(-e);
    Expr base = *this, acc = Expr::integer(1);
    long n = e;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

namespace {

// Exact integer k-th root, or nullopt.
std::optional<Int> int_root(const Int& v, long k) {
    if (v < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = int_root(-v, k);
        if (!r) return std::nullopt;
        return -*r;
    }
    if (v == 0 || v == 1) return v;
    Int lo = 1, hi = v;
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        Int p = 1;
        bool over = false;
        for (long i = 0; i < k; ++i) {
            p *= mid;
            if (p > v) { over = true; break; }
        }
        if (over) hi = mid - 1;
        else lo = mid;
    }
    Int p = 1;
    for (long i = 0; i < k; ++i) p *= lo;
    if (p == v) return lo;
    return std::nullopt;
}

std::optional<Rat> rat_root(const Rat& v, long k) {
    auto n = int_root(boost::multiprecision::numerator(v), k);
    auto d = int_root(boost::multiprecision::denominator(v), k);
    if (!n || !d) return std::nullopt;
    return Rat(*n, *d);
}

Expr term_root(const Monomial& m, const Rat& c, long k) {
    auto cr = rat_root(c, k);
    if (!cr) throw Inconclusive("no exact rational " + std::to_string(k) + "-th root of coefficient");
    Expr out = Expr::rational(*cr);
    for (auto& [v, e] : m.f) {
        long g = std::gcd(static_cast<long>(e), k);
        long kk = k / g, ee = e / g;
        Expr factor = kk == 1 ? Expr::symbol(v) : Expr::symbol(sym_radical(v, static_cast<int>(kk)));
        out = out * factor.pow(ee);
    }
    return out;
}

} // namespace

Expr Expr::root(long k) const {
    if (k <= 0) throw Error("root index must be positive");
    if (k == 1) return *this;
    if (is_zero()) return *this;
    if (num().t.size() != 1 || den().t.size() != 1)
        throw Inconclusive("cannot take a root of a multi-term expression");
    Expr n = term_root(num().t[0].first, num().t[0].second, k);
    Expr d = term_root(den().t[0].first, den().t[0].second, k);
    return n / d;
}

namespace {

Expr expr_of_term(const Monomial& m, const Rat& c) {
    Poly p;
    p.t.emplace_back(m, c);
    return Expr::make(std::move(p), Poly::constant(1));
}

// Derivative of a single variable w.r.t. symbol s, under the dependency
// rules of the symbol kinds.
Expr var_deriv(int v, int s) {
    if (v == s) return Expr::integer(1);
    const SymInfo& vi = sym_info(v);
    switch (vi.kind) {
        case SymKind::Radical:
            if (vi.radical_base == s)
                return Expr::rational(Rat(1, vi.radical_deg)) *
                       Expr::symbol(v).pow(1 - vi.radical_deg);
            return Expr();
        case SymKind::Theta:
        case SymKind::ThetaPartial: {
            SymKind sk = sym_info(s).kind;
            if (sk == SymKind::Coord || sk == SymKind::Mom || sk == SymKind::Tau)
                return Expr::symbol(sym_partial(v, s));
            return Expr();
        }
        case SymKind::Param:
        case SymKind::Xi:
        case SymKind::XiUnk:
            if (sym_info(s).kind == SymKind::Tau) return Expr::symbol(sym_tilde_next(v));
            return Expr();
        default:
            return Expr();
    }
}

Expr poly_diff(const Poly& p, int s) {
    Expr acc;
    for (auto& [m, c] : p.t) {
        for (std::size_t i = 0; i < m.f.size(); ++i) {
            auto [v, e] = m.f[i];
            Expr d = var_deriv(v, s);
            if (d.is_zero()) continue;
            Monomial rest;
            rest.f.reserve(m.f.size());
            for (std::size_t j = 0; j < m.f.size(); ++j) {
                if (j == i) {
                    if (e > 1) rest.f.emplace_back(v, e - 1);
                } else {
                    rest.f.push_back(m.f[j]);
                }
            }
            acc = acc + expr_of_term(rest, c * e) * d;
        }
    }
    return acc;
}

} // namespace

Expr Expr::diff(int symbol) const {
    Expr dn = poly_diff(num(), symbol);
    if (den().is_constant()) {
        // den is 1 by normalization when constant
        return dn;
    }
    Expr dd = poly_diff(den(), symbol);
    Expr d = Expr::make(Poly(den()), Poly::constant(1));
    Expr n = Expr::make(Poly(num()), Poly::constant(1));
    return (dn * d - n * dd) / (d * d);
}

Expr Expr::substitute(const std::map<int, Expr>& bindings) const {
    if (bindings.empty()) return *this;
    std::set<int> vs;
    vars(vs);
    std::map<int, Expr> full = bindings;
    for (int v : vs) {
        if (full.count(v)) continue;
        const SymInfo& vi = sym_info(v);
        if (vi.kind == SymKind::Radical && full.count(vi.radical_base))
            full.emplace(v, full.at(vi.radical_base).root(vi.radical_deg));
        if (vi.kind == SymKind::ThetaPartial && full.count(vi.partial_of))
            throw Inconclusive("cannot substitute through the opaque partial " + vi.name);
    }
    auto subst_poly = [&](const Poly& p) {
        Expr acc;
        for (auto& [m, c] : p.t) {
            Expr t = Expr::rational(c);
            for (auto& [v, e] : m.f) {
                auto it = full.find(v);
                Expr base = it != full.end() ? it->second : Expr::symbol(v);
                t = t * base.pow(e);
            }
            acc = acc + t;
        }
        return acc;
    };
    return subst_poly(num()) / subst_poly(den());
}

bool Expr::is_zero() const { return num().is_zero(); }

bool Expr::is_one() const {
    return den().is_constant() && num().is_constant() && !num().is_zero() &&
           num().lead_coeff() == 1;
}

bool Expr::is_rational() const { return num().is_constant() && den().is_constant(); }

Rat Expr::rational_value() const {
    if (!is_rational()) throw Error("expression is not a rational constant");
    if (num().is_zero()) return Rat(0);
    return num().lead_coeff();
}

bool Expr::operator==(const Expr& o) const {
    if (p_ == o.p_) return true;
    return (*this - o).is_zero();
}

void Expr::vars(std::set<int>& out) const {
    poly_vars(num(), out);
    poly_vars(den(), out);
}

bool Expr::depends_on(int symbol) const {
    std::set<int> vs;
    vars(vs);
    if (vs.count(symbol)) return true;
    // a radical or opaque partial carries a hidden dependency on its base
    for (int v : vs) {
        const SymInfo& vi = sym_info(v);
        if (vi.kind == SymKind::Radical && vi.radical_base == symbol) return true;
        if (vi.kind == SymKind::ThetaPartial && vi.partial_of == symbol) return true;
    }
    return false;
}

bool Expr::provably_nonzero() const {
    if (is_zero()) return false;
    if (num().t.size() != 1) return false;
    for (auto& [v, e] : num().t[0].first.f)
        if (!sym_certified_nonzero(v)) return false;
    return true;
}

std::string Expr::str() const {
    if (den().is_constant()) return poly_str(num());
    std::string n = poly_str(num());
    std::string d = poly_str(den());
    if (num().t.size() > 1) n = "(" + n + ")";
    auto& dt = den().t;
    bool dparen = dt.size() > 1 || dt[0].second != 1 || dt[0].first.f.size() > 1;
    if (dparen) d = "(" + d + ")";
    return n + "/" + d;
}

Expr diff(const Expr& e, int symbol) { return e.diff(symbol); }
Expr substitute(const Expr& e, const std::map<int, Expr>& bindings) { return e.substitute(bindings); }
bool is_zero(const Expr& e) { return e.is_zero(); }

} // namespace dirac
