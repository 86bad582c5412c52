#include "dirac/ideal.hpp"

#include <algorithm>
#include <numeric>

#include "dirac/error.hpp"

namespace dirac {

namespace {

std::set<int> radical_set(const std::vector<Poly>& ps) {
    std::set<int> vars, rads;
    for (auto& p : ps) poly_vars(p, vars);
    for (int v : vars)
        if (sym_info(v).kind == SymKind::Radical) rads.insert(v);
    return rads;
}

bool mono_coprime(const Monomial& a, const Monomial& b) {
    return mono_gcd(a, b).f.empty();
}

Monomial mono_lcm(const Monomial& a, const Monomial& b) {
    return mono_div(mono_mul(a, b), mono_gcd(a, b));
}

// Degree for the blow-up guard: only genuinely dynamical variables count
// toward the cap. Constants act as coefficients, parameter-like symbols
// (transformation parameters, replacement functions, unknowns) never occur in
// constraint generators, and certified-nonzero symbols are invertible
// passengers pumped up only by denominator clearing; none of them can drive a
// division blow-up.
int capped_deg(const Monomial& m) {
    int d = 0;
    for (auto& [v, e] : m.f) {
        switch (sym_info(v).kind) {
            case SymKind::Const:
            case SymKind::Param:
            case SymKind::Xi:
            case SymKind::XiUnk:
            case SymKind::Tau:
                break;
            default:
                if (!sym_certified_nonzero(v)) d += e;
        }
    }
    return d;
}

} // namespace

Poly poly_reduce(const Poly& p, const std::vector<Poly>& divisors, int degree_cap) {
    Poly work = p;
    Poly rem;
    // under the graded order division never raises the lead degree, so the
    // guard only limits growth beyond what the input already carries
    int limit = degree_cap;
    if (!work.is_zero()) limit = std::max(limit, capped_deg(work.lead_mono()));
    while (!work.is_zero()) {
        if (capped_deg(work.lead_mono()) > limit)
            throw DegreeCapExceeded("total degree " + std::to_string(capped_deg(work.lead_mono())) +
                                    " exceeds cap " + std::to_string(limit));
        bool divided = false;
        for (auto& d : divisors) {
            if (d.is_zero()) continue;
            if (d.lead_mono().divides(work.lead_mono())) {
                Monomial m = mono_div(work.lead_mono(), d.lead_mono());
                Rat c = work.lead_coeff() / d.lead_coeff();
                work = poly_sub(work, poly_mul_term(d, m, c));
                divided = true;
                break;
            }
        }
        if (!divided) {
            Poly lead;
            lead.t.push_back(work.t.front());
            rem = poly_add(rem, lead);
            work.t.erase(work.t.begin());
        }
    }
    return rem;
}

// Polynomials over the localized coefficient field: monomials carry only
// dynamical variables, coefficients are rational functions of the certified
// model constants.
struct LTerm {
    Monomial m;
    Expr c;
};

struct LBasis {
    std::vector<std::vector<LTerm>> b;
};

namespace {

using LPoly = std::vector<LTerm>;

bool coeff_var(int v) {
    return sym_info(v).kind == SymKind::Const && sym_certified_nonzero(v);
}

LPoly to_lpoly(const Poly& p) {
    LPoly out;
    for (auto& [m, c] : p.t) {
        Monomial dyn;
        Expr coeff = Expr::rational(c);
        for (auto& [v, e] : m.f) {
            if (coeff_var(v)) coeff = coeff * Expr::symbol(v).pow(e);
            else dyn.f.emplace_back(v, e);
        }
        if (!out.empty() && out.back().m == dyn) out.back().c = out.back().c + coeff;
        else out.push_back({std::move(dyn), std::move(coeff)});
    }
    // constants sit between the dynamical variables in the global order, so
    // merging above may be partial: re-sort and combine
    std::stable_sort(out.begin(), out.end(),
                     [](const LTerm& a, const LTerm& b) { return mono_cmp(a.m, b.m) > 0; });
    LPoly merged;
    for (auto& t : out) {
        if (!merged.empty() && merged.back().m == t.m) merged.back().c = merged.back().c + t.c;
        else merged.push_back(std::move(t));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const LTerm& t) { return t.c.is_zero(); }),
                 merged.end());
    return merged;
}

Expr lpoly_to_expr(const LPoly& p) {
    Expr acc;
    for (auto& [m, c] : p) {
        Expr mono = c;
        for (auto& [v, e] : m.f) mono = mono * Expr::symbol(v).pow(e);
        acc = acc + mono;
    }
    return acc;
}

LPoly lpoly_sub(const LPoly& a, const LPoly& b) {
    LPoly r;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int cmp = mono_cmp(a[i].m, b[j].m);
        if (cmp > 0) r.push_back(a[i++]);
        else if (cmp < 0) r.push_back({b[j].m, -b[j].c}), ++j;
        else {
            Expr c = a[i].c - b[j].c;
            if (!c.is_zero()) r.push_back({a[i].m, std::move(c)});
            ++i; ++j;
        }
    }
    while (i < a.size()) r.push_back(a[i++]);
    while (j < b.size()) r.push_back({b[j].m, -b[j].c}), ++j;
    return r;
}

LPoly lpoly_mul_term(const LPoly& a, const Monomial& m, const Expr& c) {
    LPoly r;
    r.reserve(a.size());
    for (auto& t : a) r.push_back({mono_mul(t.m, m), t.c * c});
    return r;
}

LPoly lpoly_scale(const LPoly& a, const Expr& c) {
    LPoly r;
    r.reserve(a.size());
    for (auto& t : a) r.push_back({t.m, t.c * c});
    return r;
}

LPoly lmonic(LPoly p) {
    if (p.empty()) return p;
    return lpoly_scale(p, Expr::integer(1) / p.front().c);
}

LPoly lpoly_reduce(const LPoly& p, const std::vector<LPoly>& divisors, int degree_cap) {
    LPoly work = p;
    LPoly rem;
    int limit = degree_cap;
    if (!work.empty()) limit = std::max(limit, capped_deg(work.front().m));
    while (!work.empty()) {
        if (capped_deg(work.front().m) > limit)
            throw DegreeCapExceeded("total degree " + std::to_string(capped_deg(work.front().m)) +
                                    " exceeds cap " + std::to_string(limit));
        bool divided = false;
        for (auto& d : divisors) {
            if (d.empty()) continue;
            if (d.front().m.divides(work.front().m)) {
                Monomial m = mono_div(work.front().m, d.front().m);
                Expr c = work.front().c / d.front().c;
                work = lpoly_sub(work, lpoly_mul_term(d, m, c));
                divided = true;
                break;
            }
        }
        if (!divided) {
            rem.push_back(work.front());
            work.erase(work.begin());
        }
    }
    return rem;
}

std::vector<LPoly> buchberger(std::vector<LPoly> basis, int cap) {
    basis.erase(std::remove_if(basis.begin(), basis.end(),
                               [](const LPoly& p) { return p.empty(); }),
                basis.end());
    for (auto& b : basis) b = lmonic(b);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.emplace_back(i, j);
    while (!pairs.empty()) {
        auto [i, j] = pairs.back();
        pairs.pop_back();
        const LPoly& f = basis[i];
        const LPoly& g = basis[j];
        if (mono_coprime(f.front().m, g.front().m)) continue;
        Monomial l = mono_lcm(f.front().m, g.front().m);
        if (capped_deg(l) > cap)
            throw DegreeCapExceeded("basis completion needs degree " +
                                    std::to_string(capped_deg(l)) + " above cap " +
                                    std::to_string(cap));
        LPoly s = lpoly_sub(lpoly_mul_term(f, mono_div(l, f.front().m), Expr::integer(1)),
                            lpoly_mul_term(g, mono_div(l, g.front().m), Expr::integer(1)));
        LPoly r = lpoly_reduce(s, basis, cap);
        if (!r.empty()) {
            r = lmonic(r);
            std::size_t k = basis.size();
            basis.push_back(std::move(r));
            for (std::size_t x = 0; x < k; ++x) pairs.emplace_back(x, k);
        }
    }
    // minimalize
    std::vector<LPoly> min;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (i == j) continue;
            if (basis[j].front().m.divides(basis[i].front().m) &&
                !(basis[i].front().m == basis[j].front().m && j > i)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) min.push_back(basis[i]);
    }
    // tail-reduce to the unique reduced basis
    std::vector<LPoly> red;
    for (std::size_t i = 0; i < min.size(); ++i) {
        std::vector<LPoly> others;
        for (std::size_t j = 0; j < min.size(); ++j)
            if (j != i) others.push_back(min[j]);
        LPoly r = lpoly_reduce(min[i], others, cap);
        if (!r.empty()) red.push_back(lmonic(r));
    }
    std::sort(red.begin(), red.end(),
              [](const LPoly& a, const LPoly& b) { return mono_cmp(a.front().m, b.front().m) > 0; });
    return red;
}

std::vector<LPoly> to_lbasis(const std::vector<Poly>& ps) {
    std::vector<LPoly> out;
    for (auto& p : ps) {
        LPoly l = to_lpoly(p);
        if (!l.empty()) out.push_back(std::move(l));
    }
    return out;
}

} // namespace

namespace {

// Saturate: a radical whose pure power vanishes on the surface vanishes
// itself there, so it joins the generating set.
void saturate_radicals(std::vector<Poly>& raw, int cap) {
    bool grew = true;
    while (grew) {
        grew = false;
        std::set<int> rads = radical_set(raw);
        if (rads.empty()) break;
        auto gb = buchberger(to_lbasis(raw), cap);
        for (int r : rads) {
            LPoly rv = to_lpoly(Poly::variable(r));
            if (lpoly_reduce(rv, gb, cap).empty()) continue;  // already a member
            int maxe = 0;
            for (auto& p : raw)
                for (auto& [m, c] : p.t) maxe = std::max(maxe, m.exponent(r));
            for (int j = 2; j <= std::max(maxe, 2); ++j) {
                Poly pw = Poly::variable(r);
                for (int x = 1; x < j; ++x) pw = poly_mul(pw, Poly::variable(r));
                if (lpoly_reduce(to_lpoly(pw), gb, cap).empty()) {
                    raw.push_back(Poly::variable(r));
                    grew = true;
                    break;
                }
            }
            if (grew) break;
        }
    }
}

// Rebuild an expression from a localized remainder over the denominator d.
Expr over_den(const LPoly& r, const Poly& d) {
    Expr num = lpoly_to_expr(r);
    if (num.is_zero()) return num;
    return num / Expr::make(Poly(d), Poly::constant(1));
}

} // namespace

Ideal::Ideal(std::vector<Expr> gens, int degree_cap) : cap_(degree_cap) {
    std::vector<Poly> raw;
    for (auto& g : gens)
        if (!g.is_zero()) raw.push_back(g.num());
    std::set<int> rads = radical_set(raw);
    if (!rads.empty())
        for (auto& p : raw) p = poly_radical_rewrite(p, rads);
    saturate_radicals(raw, cap_);
    gens_ = std::move(raw);
}

const LBasis& Ideal::localized() const {
    if (!lgens_) lgens_ = std::make_shared<const LBasis>(LBasis{to_lbasis(gens_)});
    return *lgens_;
}

const LBasis& Ideal::groebner() const {
    if (!gb_) gb_ = std::make_shared<const LBasis>(LBasis{buchberger(localized().b, cap_)});
    return *gb_;
}

Expr Ideal::reduce(const Expr& e) const { return reduce(e, false); }

Expr Ideal::reduce(const Expr& e, bool best_effort) const {
    if (gens_.empty() || e.is_zero()) return e;
    std::set<int> erads;
    {
        std::set<int> vars;
        e.vars(vars);
        for (int v : vars)
            if (sym_info(v).kind == SymKind::Radical) erads.insert(v);
    }
    std::set<int> grads = radical_set(gens_);
    bool new_rads = false;
    for (int r : erads)
        if (!grads.count(r)) new_rads = true;
    Poly n = e.num();
    Poly d = e.den();
    if (new_rads) {
        std::set<int> all = grads;
        all.insert(erads.begin(), erads.end());
        n = poly_radical_rewrite(n, all);
        d = poly_radical_rewrite(d, all);
        std::vector<Poly> gens2 = gens_;
        for (auto& g : gens2) g = poly_radical_rewrite(g, all);
        saturate_radicals(gens2, cap_);
        std::vector<LPoly> plain = to_lbasis(gens2);
        LPoly ln = to_lpoly(n);
        LPoly r = lpoly_reduce(ln, plain, cap_);
        if (!r.empty()) {
            try {
                r = lpoly_reduce(ln, buchberger(plain, cap_), cap_);
            } catch (const DegreeCapExceeded&) {
                // completion infeasible under the cap: the division normal
                // form is only a certificate when it is zero
                if (!best_effort) throw;
            }
        }
        return over_den(r, d);
    }
    if (!grads.empty()) {
        n = poly_radical_rewrite(n, grads);
        d = poly_radical_rewrite(d, grads);
    }
    LPoly ln = to_lpoly(n);
    LPoly r = lpoly_reduce(ln, localized().b, cap_);
    if (!r.empty() && !gb_failed_) {
        try {
            r = lpoly_reduce(ln, groebner().b, cap_);
        } catch (const DegreeCapExceeded&) {
            // completion infeasible under the cap: remember, and in
            // best-effort mode keep serving division normal forms (zero
            // still certifies membership)
            gb_failed_ = true;
            if (!best_effort) throw;
        }
    }
    if (gb_failed_ && !best_effort && !r.empty())
        throw DegreeCapExceeded("basis completion exceeded the degree cap");
    return over_den(r, d);
}

Expr reduce_mod_ideal(const Expr& e, const std::vector<Expr>& gens, int degree_cap) {
    return Ideal(gens, degree_cap).reduce(e);
}

std::vector<Expr> radical_aware_divide(const Expr& e, const std::vector<Expr>& divisors,
                                       Expr& remainder) {
    std::vector<Poly> dps;
    for (auto& d : divisors) {
        if (!d.den().is_constant())
            throw DecompositionFailed("divisor with non-constant denominator: " + d.str());
        dps.push_back(d.num());
    }
    std::set<int> rads;
    {
        std::set<int> vars;
        e.vars(vars);
        for (auto& d : divisors) d.vars(vars);
        for (int v : vars)
            if (sym_info(v).kind == SymKind::Radical) rads.insert(v);
    }
    Poly n = poly_radical_rewrite(e.num(), rads);
    Poly den = poly_radical_rewrite(e.den(), rads);
    for (auto& d : dps) d = poly_radical_rewrite(d, rads);
    Expr den_e = Expr::make(Poly(den), Poly::constant(1));

    auto term_expr = [](const Monomial& m, const Rat& c) {
        Poly p;
        p.t.emplace_back(m, c);
        return Expr::make(std::move(p), Poly::constant(1));
    };

    std::vector<Expr> coeffs(divisors.size());
    for (std::size_t i = 0; i < dps.size(); ++i) {
        const Poly& g = dps[i];
        if (g.is_zero()) continue;
        Expr q;
        if (g.t.size() == 1) {
            const Monomial& gm = g.lead_mono();
            Poly keep;
            for (auto& [m, c] : n.t) {
                bool ok = true;
                for (auto& [v, ge] : gm.f) {
                    int te = m.exponent(v);
                    bool relaxed = sym_info(v).kind == SymKind::Radical && sym_certified_nonzero(v);
                    if (!(te >= ge || (relaxed && te >= 1))) { ok = false; break; }
                }
                if (ok) {
                    q = q + term_expr(m, c) / term_expr(gm, g.lead_coeff());
                } else {
                    Poly one;
                    one.t.emplace_back(m, c);
                    keep = poly_add(keep, one);
                }
            }
            n = std::move(keep);
        } else {
            Poly work = n, rem;
            while (!work.is_zero()) {
                if (g.lead_mono().divides(work.lead_mono())) {
                    Monomial m = mono_div(work.lead_mono(), g.lead_mono());
                    Rat c = work.lead_coeff() / g.lead_coeff();
                    q = q + term_expr(m, c);
                    work = poly_sub(work, poly_mul_term(g, m, c));
                } else {
                    Poly one;
                    one.t.push_back(work.t.front());
                    rem = poly_add(rem, one);
                    work.t.erase(work.t.begin());
                }
            }
            n = std::move(rem);
        }
        coeffs[i] = q / den_e;
    }
    remainder = Expr::make(std::move(n), std::move(den));
    return coeffs;
}

Expr constraint_representative(const Expr& e) {
    if (e.is_zero()) return e;
    Poly n = e.num();
    Poly d = e.den();
    // Only certified coordinates/constants are treated as unit factors here;
    // momenta or radicals carrying a positivity assumption can still be the
    // substance of the constraint itself.
    auto strippable = [](int v) {
        SymKind k = sym_info(v).kind;
        return (k == SymKind::Coord || k == SymKind::Const) && sym_certified_nonzero(v);
    };
    auto strip_certified = [&](Poly& p) {
        if (p.is_zero()) return;
        Monomial g;
        bool first = true;
        for (auto& [m, c] : p.t) {
            Monomial cert;
            for (auto& [v, ex] : m.f)
                if (strippable(v)) cert.f.emplace_back(v, ex);
            if (first) { g = cert; first = false; }
            else g = mono_gcd(g, cert);
        }
        if (g.f.empty()) return;
        for (auto& [m, c] : p.t) m = mono_div(m, g);
        std::sort(p.t.begin(), p.t.end(),
                  [](auto& x, auto& y) { return mono_cmp(x.first, y.first) > 0; });
    };
    strip_certified(n);
    strip_certified(d);
    // numerator = (1/D) * N with N primitive integer
    Int D = 1;
    for (auto& [m, c] : n.t) D = boost::multiprecision::lcm(D, boost::multiprecision::denominator(c));
    Int g = 0;
    for (auto& [m, c] : n.t) {
        Int ic = boost::multiprecision::numerator(c * Rat(D));
        g = boost::multiprecision::gcd(g, ic < 0 ? Int(-ic) : ic);
    }
    if (g == 0) g = 1;
    Poly N = poly_scale(n, Rat(D, g));
    Expr result = Expr::make(std::move(N), std::move(d)) / Expr::rational(Rat(D));
    if (result.is_zero()) return result;
    if (result.num().t.size() == 1 && result.den().is_constant()) {
        const Monomial& m = result.num().t[0].first;
        std::vector<std::pair<int, int>> factors;  // symbol, exponent
        for (auto& [v, ex] : m.f) {
            const SymInfo& vi = sym_info(v);
            if (vi.kind == SymKind::Radical) factors.emplace_back(vi.radical_base, 1);
            else if (strippable(v)) continue;
            else factors.emplace_back(v, ex);
        }
        if (!factors.empty()) {
            int eg = 0;
            for (auto& [v, ex] : factors) eg = std::gcd(eg, ex);
            if (eg == 0) eg = 1;
            Expr out = Expr::integer(1);
            for (auto& [v, ex] : factors) out = out * Expr::symbol(v).pow(ex / eg);
            return out;
        }
        return result.num().lead_coeff() < 0 ? -result : result;
    }
    if (result.num().t.back().second < 0) result = -result;
    return result;
}

} // namespace dirac
