#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "dirac/brackets.hpp"
#include "dirac/canonical.hpp"
#include "dirac/parser.hpp"

using namespace dirac;

namespace {

struct Analyzed {
    Model m;
    LagAnalysis la;
    CanAnalysis can;
    BracketContext ctx;
};

Analyzed analyze(const std::string& name) {
    Analyzed a;
    a.m = load_model(name);
    a.la = analyze_lagrangian(a.m, a.m.degree_cap);
    a.can = analyze_canonical(a.m, a.la, a.m.degree_cap);
    a.ctx = make_bracket_context(a.m, a.la.M, a.can.Uhat);
    return a;
}

// random low-degree polynomial over the phase space of a model
Expr random_phase_expr(const Model& m, std::mt19937& rng) {
    std::uniform_int_distribution<int> nterms(1, 3), coef(-4, 4), pick(0, 2 * m.N - 1),
        expo(1, 2);
    Expr acc;
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        int c = coef(rng);
        if (c == 0) c = 1;
        Expr term = Expr::integer(c);
        int nf = nterms(rng);
        for (int f = 0; f < nf; ++f) {
            int i = pick(rng);
            int s = i < m.N ? m.coords[static_cast<std::size_t>(i)]
                            : m.moms[static_cast<std::size_t>(i - m.N)];
            term = term * Expr::symbol(s).pow(expo(rng));
        }
        acc = acc + term;
    }
    return acc;
}

} // namespace

TEST_CASE("poisson bracket: canonical pairs") {
    Model m = load_model("cawley");
    Expr q1 = Expr::symbol(m.coords[0]);
    Expr p1 = Expr::symbol(m.moms[0]), p2 = Expr::symbol(m.moms[1]);
    CHECK(poisson(q1, p1, m) == Expr::integer(1));
    CHECK(poisson(q1, p2, m).is_zero());
    CHECK(poisson(p1, q1, m) == Expr::integer(-1));
    CHECK(poisson(q1, q1, m).is_zero());
}

TEST_CASE("poisson bracket laws on random triples") {
    Model m = load_model("cawley");
    std::mt19937 rng(20240817);
    for (int iter = 0; iter < 100; ++iter) {
        Expr F = random_phase_expr(m, rng);
        Expr G = random_phase_expr(m, rng);
        Expr K = random_phase_expr(m, rng);
        // antisymmetry
        CHECK((poisson(F, G, m) + poisson(G, F, m)).is_zero());
        // bilinearity
        CHECK(poisson(F + G, K, m) == poisson(F, K, m) + poisson(G, K, m));
        CHECK(poisson(3 * F, K, m) == 3 * poisson(F, K, m));
        // Leibniz
        CHECK(poisson(F * G, K, m) == F * poisson(G, K, m) + poisson(F, K, m) * G);
        // Jacobi
        Expr jac = poisson(F, poisson(G, K, m), m) + poisson(G, poisson(K, F, m), m) +
                   poisson(K, poisson(F, G, m), m);
        CHECK(jac.is_zero());
    }
}

TEST_CASE("m_bracket: symmetry and the identity-Hessian degenerate case") {
    Analyzed a = analyze("cawley");
    std::mt19937 rng(7);
    for (int iter = 0; iter < 30; ++iter) {
        Expr F = random_phase_expr(a.m, rng);
        Expr G = random_phase_expr(a.m, rng);
        CHECK(m_bracket(a.ctx, F, G) == m_bracket(a.ctx, G, F));
    }
    BracketContext idctx = a.ctx;
    idctx.M_at_Uhat = identity_matrix(a.m.N);
    Expr F = random_phase_expr(a.m, rng), G = random_phase_expr(a.m, rng);
    Expr expect;
    for (int i = 0; i < a.m.N; ++i) {
        auto idx = static_cast<std::size_t>(i);
        expect = expect + F.diff(a.m.moms[idx]) * G.diff(a.m.moms[idx]);
    }
    CHECK(m_bracket(idctx, F, G) == expect);
}

TEST_CASE("em_bracket vanishes on momentum-free arguments") {
    Analyzed a = analyze("cawley");
    Expr c = Expr::integer(5);
    Expr q2 = Expr::symbol(a.m.coords[1]);
    CHECK(em_bracket(a.ctx, c, q2).is_zero());
}

TEST_CASE("cawley constraints close under the M-bracket") {
    Analyzed a = analyze("cawley");
    std::vector<Expr> cs = a.can.all_constraints();
    REQUIRE(cs.size() == 3);
    for (auto& f : cs)
        for (auto& g : cs) CHECK(m_bracket(a.ctx, f, g).is_zero());
    CHECK(is_class_IA(a.ctx, cs).class_ia);
}

TEST_CASE("frenkel constraints are class IA") {
    Analyzed a = analyze("frenkel");
    CHECK(is_class_IA(a.ctx, a.can.all_constraints(), a.m.degree_cap).class_ia);
}

TEST_CASE("relativistic particle: class IA only in the massless case") {
    Analyzed massless = analyze("relparticle_massless");
    CHECK(is_class_IA(massless.ctx, massless.can.all_constraints()).class_ia);

    Analyzed massive = analyze("relparticle_massive");
    ClassIAResult r = is_class_IA(massive.ctx, massive.can.all_constraints());
    CHECK_FALSE(r.class_ia);
    // the obstruction is the mass term: {chi,chi}_M = (2chi - m^2)/e mod constraints
    Expr msq = Expr::symbol(massive.m.constants[0]).pow(2);
    Expr e = Expr::symbol(massive.m.coords[4]);
    CHECK(r.table[1][1] == -msq / e);
}

TEST_CASE("bilocal M-bracket table") {
    Analyzed a = analyze("bilocal");
    REQUIRE(a.can.primaries.size() == 2);
    REQUIRE(a.can.secondary_chain.size() == 2);
    REQUIRE(a.can.secondary_chain[0].size() == 2);
    REQUIRE(a.can.secondary_chain[1].size() == 1);
    Expr chi1 = a.can.secondary_chain[0][0], chi2 = a.can.secondary_chain[0][1];
    Expr chi0 = a.can.secondary_chain[1][0];
    Expr e1 = Expr::symbol(a.m.coords[8]), e2 = Expr::symbol(a.m.coords[9]);

    // primaries have vanishing M-brackets with everything
    for (auto& phi : a.can.primaries)
        for (auto& c : a.can.all_constraints()) CHECK(m_bracket(a.ctx, phi, c).is_zero());

    // diagonal and cross values among the secondaries
    CHECK(m_bracket(a.ctx, chi1, chi1) == 2 * chi1 / e1);
    CHECK(m_bracket(a.ctx, chi2, chi2) == 2 * chi2 / e2);
    CHECK(m_bracket(a.ctx, chi1, chi2).is_zero());
    CHECK(m_bracket(a.ctx, chi0, chi1) == chi0 / e1);
    CHECK(m_bracket(a.ctx, chi0, chi2) == chi0 / e2);
    CHECK(m_bracket(a.ctx, chi0, chi0) == 2 * chi2 / e1 + 2 * chi1 / e2);

    CHECK(is_class_IA(a.ctx, a.can.all_constraints(), a.m.degree_cap).class_ia);
}
