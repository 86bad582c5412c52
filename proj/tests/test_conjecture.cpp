#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "dirac/brackets.hpp"
#include "dirac/canonical.hpp"
#include "dirac/conjecture.hpp"
#include "dirac/error.hpp"
#include "dirac/ideal.hpp"
#include "dirac/transform.hpp"

using namespace dirac;

namespace {

struct Analyzed {
    Model m;
    LagAnalysis la;
    CanAnalysis can;
    BracketContext ctx;
    DtrGenerator dtr;
};

Analyzed analyze(const std::string& name) {
    Analyzed a;
    a.m = load_model(name);
    a.la = analyze_lagrangian(a.m, a.m.degree_cap);
    a.can = analyze_canonical(a.m, a.la, a.m.degree_cap);
    a.ctx = make_bracket_context(a.m, a.la.M, a.can.Uhat);
    a.dtr = build_dtr(a.m, a.can);
    return a;
}

// Verdict computation on the larger models takes seconds; share one report
// per model across the test cases.
const ConjectureReport& cached_report(const Analyzed& a, const std::string& name) {
    static std::map<std::string, ConjectureReport> cache;
    auto it = cache.find(name);
    if (it == cache.end())
        it = cache.emplace(name, petr_check(a.dtr, a.m, a.la, a.can, a.ctx,
                                            a.m.degree_cap))
                 .first;
    return it->second;
}

Expr S(int id) { return Expr::symbol(id); }
Expr Stl(int id) { return S(sym_tilde_next(id)); }

bool all_zero(const std::vector<Expr>& v) {
    for (auto& e : v)
        if (!e.is_zero()) return false;
    return true;
}

// The generator with every primary scaled by a and every secondary by b;
// the transformation itself is unchanged up to parameter renaming, so the
// verdict must not move.
DtrGenerator rescaled(const Analyzed& a, int pa, int sb) {
    DtrGenerator g = a.dtr;
    g.Q = Expr();
    std::size_t k = 0;
    for (auto& phi : a.can.primaries)
        g.Q = g.Q + S(g.eta_params[k++]) * Expr::integer(pa) * phi;
    std::size_t ci = 0;
    for (auto& lvl : a.can.secondary_chain)
        for (auto& chi : lvl) {
            Expr w = Expr::integer(1);
            auto it = a.m.dtr_weights.find(static_cast<int>(ci) + 1);
            if (it != a.m.dtr_weights.end()) w = it->second;
            g.Q = g.Q + S(g.eps_params[ci++]) * w * Expr::integer(sb) * chi;
        }
    return g;
}

} // namespace

TEST_CASE("generator is linear in the constraints with fresh parameters") {
    Analyzed a = analyze("cawley");
    REQUIRE(a.dtr.eta_params.size() == 1);
    REQUIRE(a.dtr.eps_params.size() == 2);
    Expr expect = S(a.dtr.eta_params[0]) * a.can.primaries[0] +
                  S(a.dtr.eps_params[0]) * a.can.secondaries()[0] +
                  S(a.dtr.eps_params[1]) * a.can.secondaries()[1];
    CHECK(a.dtr.Q == expect);
}

TEST_CASE("generator of an unconstrained model is zero") {
    Analyzed a = analyze("freeparticle");
    CHECK(a.can.all_constraints().empty());
    CHECK(a.dtr.Q.is_zero());
}

TEST_CASE("generator construction refuses second-class models") {
    Model m = load_model("secondclass");
    LagAnalysis la = analyze_lagrangian(m, m.degree_cap);
    CanAnalysis can = analyze_canonical(m, la, m.degree_cap);
    CHECK_THROWS_AS(build_dtr(m, can), SecondClassPresent);
    BracketContext ctx = make_bracket_context(m, la.M, can.Uhat);
    DtrGenerator g;
    CHECK_THROWS_AS(petr_check(g, m, la, can, ctx, m.degree_cap), SecondClassPresent);
}

TEST_CASE("relativistic particle: tilde of the generator over the constraint") {
    Analyzed a = analyze("relparticle_massive");
    auto co = q_tilde_decompose(a.dtr.Q, a.m, a.can, a.m.degree_cap);
    REQUIRE(co.size() == 1);
    CHECK(co[0] == Stl(a.dtr.eps_params[0]) - S(a.dtr.eta_params[0]));
}

TEST_CASE("cawley: decomposition coefficients") {
    Analyzed a = analyze("cawley");
    auto co = q_tilde_decompose(a.dtr.Q, a.m, a.can, a.m.degree_cap);
    REQUIRE(co.size() == 2);
    Expr q2 = S(a.m.coords[1]);
    Expr eta = S(a.dtr.eta_params[0]);
    CHECK(co[0] == Stl(a.dtr.eps_params[0]) - Expr::rational(Rat(1, 2)) * eta * q2);
    CHECK(co[1] == Stl(a.dtr.eps_params[1]) + S(a.dtr.eps_params[0]));
}

TEST_CASE("bilocal: decomposition coefficients") {
    Analyzed a = analyze("bilocal");
    auto co = q_tilde_decompose(a.dtr.Q, a.m, a.can, a.m.degree_cap);
    REQUIRE(co.size() == 3);
    REQUIRE(a.can.theta_syms.size() == 2);
    Expr e1 = S(a.m.coords[8]), e2 = S(a.m.coords[9]);
    Expr kap = S(sym_lookup("kappa"));
    Expr th1 = S(a.can.theta_syms[0]), th2 = S(a.can.theta_syms[1]);
    Expr ep1 = S(a.dtr.eps_params[0]), ep2 = S(a.dtr.eps_params[1]);
    Expr ep3 = S(a.dtr.eps_params[2]);
    Expr et1 = S(a.dtr.eta_params[0]), et2 = S(a.dtr.eta_params[1]);
    CHECK(co[0] == Expr::integer(4) * kap * e1 * ep3 + e1 * Stl(a.dtr.eps_params[0]) +
                       th1 * ep1 - et1);
    CHECK(co[1] == Expr::integer(-4) * kap * e2 * ep3 + e2 * Stl(a.dtr.eps_params[1]) +
                       th2 * ep2 - et2);
    CHECK(co[2] == Stl(a.dtr.eps_params[2]) -
                       Expr::integer(2) * kap * e1 * e2 * (ep1 - ep2));
}

TEST_CASE("decomposition reconstructs tilde of the generator modulo primaries") {
    for (const char* name : {"relparticle_massive", "cawley", "frenkel", "bilocal"}) {
        Analyzed a = analyze(name);
        auto co = q_tilde_decompose(a.dtr.Q, a.m, a.can, a.m.degree_cap);
        auto secs = a.can.secondaries();
        REQUIRE(co.size() == secs.size());
        Expr rec;
        for (std::size_t i = 0; i < co.size(); ++i) rec = rec + co[i] * secs[i];
        Expr diff = tilde(a.dtr.Q, a.can.H, a.m) - rec;
        CHECK(reduce_mod_ideal(diff, a.can.primaries, a.m.degree_cap).is_zero());
    }
}

TEST_CASE("canonical gauge detection") {
    Analyzed a = analyze("relparticle_massive");
    // the family equation eps~ - eta = 0 singles out the gauge transformations
    std::map<int, Expr> tie{{a.dtr.eta_params[0], Stl(a.dtr.eps_params[0])}};
    Expr Qg = a.dtr.Q.substitute(tie);
    CHECK(is_cgtr(Qg, a.m, a.can, a.m.degree_cap));
    CHECK(!is_cgtr(a.dtr.Q, a.m, a.can, a.m.degree_cap));
    CHECK(is_cgtr(Expr(), a.m, a.can, a.m.degree_cap));

    Analyzed c = analyze("cawley");
    CHECK(!is_cgtr(c.dtr.Q, c.m, c.can, c.m.degree_cap));
}

TEST_CASE("gauge family equations are the decomposition coefficients") {
    Analyzed a = analyze("cawley");
    auto fam = cgtr_family(a.dtr, a.m, a.can, a.m.degree_cap);
    auto co = q_tilde_decompose(a.dtr.Q, a.m, a.can, a.m.degree_cap);
    CHECK(fam == co);
    // the second equation reads eps2~ = -eps1
    CHECK(fam[1] == Stl(a.dtr.eps_params[1]) + S(a.dtr.eps_params[0]));
}

TEST_CASE("relativistic particle is equivalence-preserving for both masses") {
    for (const char* name : {"relparticle_massive", "relparticle_massless"}) {
        Analyzed a = analyze(name);
        ConjectureReport r = petr_check(a.dtr, a.m, a.la, a.can, a.ctx, a.m.degree_cap);
        CHECK(r.verdict == Verdict::PETR_ALL);
        REQUIRE(r.xi_solution.size() == 1);
        CHECK(r.xi_solution.begin()->second ==
              Stl(a.dtr.eps_params[0]) - S(a.dtr.eta_params[0]));
    }
}

TEST_CASE("cawley is a counterexample with a second-derivative witness") {
    Analyzed a = analyze("cawley");
    ConjectureReport r = petr_check(a.dtr, a.m, a.la, a.can, a.ctx, a.m.degree_cap);
    CHECK(r.verdict == Verdict::NOT_PETR);
    CHECK(!r.witness.is_zero());
    CHECK(r.witness == Stl(sym_tilde_next(a.dtr.eps_params[1])));
}

TEST_CASE("frenkel: all condition rows vanish identically") {
    Analyzed a = analyze("frenkel");
    ConjectureReport r = petr_check(a.dtr, a.m, a.la, a.can, a.ctx, a.m.degree_cap);
    CHECK(r.verdict == Verdict::PETR_ALL);
    CHECK(all_zero(r.cond1_residuals));
    CHECK(all_zero(r.cond2_residuals));
}

TEST_CASE("unconstrained model is trivially equivalence-preserving") {
    Analyzed a = analyze("freeparticle");
    ConjectureReport r = petr_check(a.dtr, a.m, a.la, a.can, a.ctx, a.m.degree_cap);
    CHECK(r.verdict == Verdict::PETR_ALL);
}

TEST_CASE("bilocal: exceptional parameter family") {
    Analyzed a = analyze("bilocal");
    const ConjectureReport& r = cached_report(a, "bilocal");
    CHECK(r.verdict == Verdict::PETR_EXCEPT);
    Expr ep1 = S(a.dtr.eps_params[0]), ep2 = S(a.dtr.eps_params[1]);
    CHECK(r.locus == constraint_representative(ep1 - ep2));
    // the momenta coefficients are exactly the decomposition coefficients of
    // the matching secondaries
    auto co = q_tilde_decompose(a.dtr.Q, a.m, a.can, a.m.degree_cap);
    REQUIRE(r.xi_solution.size() == 2);
    auto it = r.xi_solution.begin();
    CHECK(it->second == co[0]);
    CHECK((++it)->second == co[1]);
    // the surviving equation on the replacement functions
    REQUIRE(r.xi_equations.size() == 1);
    int x1 = sym_lookup("XI1"), x2 = sym_lookup("XI2");
    REQUIRE(x1 >= 0);
    REQUIRE(x2 >= 0);
    Expr expect = Stl(a.dtr.eps_params[2]) -
                  Expr::integer(2) * S(sym_lookup("kappa")) * S(x1) * S(x2) * (ep1 - ep2);
    CHECK(r.xi_equations[0] == constraint_representative(expect));
}

TEST_CASE("closed constraint algebra makes the preservation rows vanish") {
    for (const char* name : {"bilocal", "cawley", "frenkel"}) {
        Analyzed a = analyze(name);
        const ConjectureReport& r = cached_report(a, name);
        CHECK(r.class_ia);
        CHECK(all_zero(r.cond1_residuals));
    }
}

TEST_CASE("verdict is invariant under constant rescaling of the constraints") {
    for (const char* name : {"relparticle_massive", "cawley", "frenkel", "bilocal"}) {
        Analyzed a = analyze(name);
        Verdict base = cached_report(a, name).verdict;
        for (int s : {2, 3}) {
            DtrGenerator g = rescaled(a, s, 5 - s);
            Verdict v = petr_check(g, a.m, a.la, a.can, a.ctx, a.m.degree_cap).verdict;
            CHECK(v == base);
        }
    }
}

TEST_CASE("gauge transformations preserve equivalence") {
    Analyzed a = analyze("relparticle_massive");
    std::map<int, Expr> tie{{a.dtr.eta_params[0], Stl(a.dtr.eps_params[0])}};
    DtrGenerator g = a.dtr;
    g.Q = a.dtr.Q.substitute(tie);
    REQUIRE(is_cgtr(g.Q, a.m, a.can, a.m.degree_cap));
    ConjectureReport r = petr_check(g, a.m, a.la, a.can, a.ctx, a.m.degree_cap);
    CHECK(r.verdict == Verdict::PETR_ALL);
}

TEST_CASE("variation identity holds for every corpus generator") {
    for (const char* name :
         {"relparticle_massive", "relparticle_massless", "cawley", "frenkel", "bilocal"}) {
        Analyzed a = analyze(name);
        CHECK(verify_appendix_identity(a.dtr.Q, a.m, a.la, a.can, a.m.degree_cap)
                  .is_zero());
    }
}
