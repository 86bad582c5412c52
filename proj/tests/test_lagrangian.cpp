#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "dirac/error.hpp"
#include "dirac/lagrangian.hpp"
#include "dirac/parser.hpp"

using namespace dirac;

namespace {

Expr row_dot(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    Expr acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc = acc + a[i] * b[i];
    return acc;
}

std::vector<Expr> mat_vec(const Matrix& m, const std::vector<Expr>& v) {
    std::vector<Expr> out;
    for (auto& row : m) out.push_back(row_dot(row, v));
    return out;
}

// Structural invariants every analysis must satisfy.
void check_invariants(const Model& m, const LagAnalysis& la) {
    auto n = static_cast<std::size_t>(m.N);
    auto R = static_cast<std::size_t>(la.R);

    // the velocity Hessian is symmetric
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            CHECK(la.M[a][b] == la.M[b][a]);

    // Qmat * M * C_perm has the block form [[I, N'], [0, 0]]
    Matrix qm = mat_mul(la.Qmat, la.M);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Expr got = qm[i][static_cast<std::size_t>(la.C_perm[j])];
            CHECK(got == la.reduced[i][j]);
            if (i >= R) CHECK(got.is_zero());
            else if (j < R) CHECK(got == (i == j ? Expr::integer(1) : Expr()));
        }

    // null rows annihilate M, and there are N - R of them
    CHECK(la.z.size() == n - R);
    for (auto& zrow : la.z)
        for (std::size_t b = 0; b < n; ++b) {
            Expr acc;
            for (std::size_t a = 0; a < n; ++a) acc = acc + zrow[a] * la.M[a][b];
            CHECK(acc.is_zero());
        }
    CHECK(la.vsyms.size() == n - R);

    // the general solution satisfies the velocity equations: the first R
    // entries of Q(M udot + omega) vanish, the rest are the level-1 functions
    std::vector<Expr> resid = mat_vec(la.M, la.udot);
    for (std::size_t a = 0; a < n; ++a) resid[a] = resid[a] + la.omega[a];
    std::vector<Expr> qres = mat_vec(la.Qmat, resid);
    for (std::size_t a = 0; a < R; ++a) CHECK(qres[a].is_zero());
    for (std::size_t a = R; a < n; ++a)
        CHECK(qres[a] == row_dot(la.z[a - R], la.omega));
}

// The evolution derivative of every accepted constraint lies in the ideal of
// all accepted constraints once the chain has closed first-class.
void check_chain_closure(const Model& m, const LagAnalysis& la) {
    REQUIRE(la.chain_terminated);
    REQUIRE_FALSE(la.second_class);
    std::vector<Expr> all = la.accepted_lcs();
    auto n = static_cast<std::size_t>(m.N);
    for (auto& c : all) {
        Expr d;
        for (std::size_t a = 0; a < n; ++a) {
            d = d + Expr::symbol(m.vels[a]) * c.diff(m.coords[a]);
            d = d + la.udot[a] * c.diff(m.vels[a]);
        }
        CHECK(reduce_mod_ideal(d, all).is_zero());
    }
}

} // namespace

TEST_CASE("sweep_out on explicit matrices") {
    Expr one = Expr::integer(1);
    SweepResult full = sweep_out({{Expr(), one}, {one, Expr()}});
    CHECK(full.R == 2);
    CHECK(full.z.empty());

    Model m = load_model("cawley");
    Expr q1 = Expr::symbol(m.coords[0]);
    SweepResult rk1 = sweep_out({{q1, q1}, {q1, q1}});
    CHECK(rk1.R == 1);
    REQUIRE(rk1.z.size() == 1);
    // the null row kills both matrix rows
    CHECK((rk1.z[0][0] * q1 + rk1.z[0][1] * q1).is_zero());
}

TEST_CASE("mat_inverse") {
    Expr one = Expr::integer(1);
    Matrix a = {{one, Expr::integer(2)}, {Expr::integer(3), Expr::integer(4)}};
    Matrix prod = mat_mul(a, mat_inverse(a));
    CHECK(prod[0][0] == one);
    CHECK(prod[0][1].is_zero());
    CHECK(prod[1][0].is_zero());
    CHECK(prod[1][1] == one);
    CHECK_THROWS_AS((void)mat_inverse(Matrix{{one, one}, {one, one}}), XNotInvertible);
}

TEST_CASE("free particle: regular system, no constraints") {
    Model m = load_model("freeparticle");
    LagAnalysis la = analyze_lagrangian(m);
    CHECK(la.R == 1);
    CHECK(la.lc_chain.empty());
    CHECK(la.udot[0].is_zero());
    CHECK_FALSE(la.second_class);
    CHECK(la.chain_terminated);
    check_invariants(m, la);
}

TEST_CASE("cawley: chain q2, then u2, then closure") {
    Model m = load_model("cawley");
    LagAnalysis la = analyze_lagrangian(m);
    CHECK(la.R == 2);
    check_invariants(m, la);

    Expr q2 = Expr::symbol(m.coords[1]), q3 = Expr::symbol(m.coords[2]);
    Expr u2 = Expr::symbol(m.vels[1]);
    // determined accelerations
    CHECK(la.udot[0] == -(q3 * q2));
    CHECK(la.udot[1].is_zero());
    CHECK(la.udot[2] == Expr::symbol(la.vsyms[0]));

    REQUIRE(la.lc_chain.size() == 2);
    REQUIRE(la.lc_chain[0].size() == 1);
    CHECK(la.lc_chain[0][0].expr == q2);
    CHECK(la.lc_chain[0][0].status == LCStatus::new_constraint);
    REQUIRE(la.lc_chain[1].size() == 1);
    CHECK(la.lc_chain[1][0].expr == u2);
    check_chain_closure(m, la);
}

TEST_CASE("frenkel: degenerate kinetic term, same chain as cawley") {
    Model m = load_model("frenkel");
    LagAnalysis la = analyze_lagrangian(m);
    CHECK(la.R == 2);
    check_invariants(m, la);

    Expr q2 = Expr::symbol(m.coords[1]), q3 = Expr::symbol(m.coords[2]);
    Expr u2 = Expr::symbol(m.vels[1]);
    CHECK(la.udot[0] == -(q3 * q2) / (2 * u2));
    CHECK(la.udot[1].is_zero());
    REQUIRE(la.lc_chain.size() == 2);
    CHECK(la.lc_chain[0][0].expr == q2);
    CHECK(la.lc_chain[1][0].expr == u2);
    check_chain_closure(m, la);
}

TEST_CASE("relativistic particle: reparametrization constraint") {
    for (const char* name : {"relparticle_massive", "relparticle_massless"}) {
        CAPTURE(name);
        Model m = load_model(name);
        LagAnalysis la = analyze_lagrangian(m);
        CHECK(la.R == 4);
        CHECK(la.vsyms.size() == 1);
        check_invariants(m, la);

        REQUIRE(la.lc_chain.size() == 1);
        REQUIRE(la.lc_chain[0].size() == 1);
        Expr want = std::string(name) == "relparticle_massive"
                        ? parse_expr("(dot(ux,ux) + m^2*e^2)/2", m)
                        : parse_expr("dot(ux,ux)/2", m);
        CHECK(la.lc_chain[0][0].expr == want);
        check_chain_closure(m, la);
    }
}

TEST_CASE("bilocal: two level-1 constraints and one cross constraint") {
    Model m = load_model("bilocal");
    LagAnalysis la = analyze_lagrangian(m);
    CHECK(la.R == 8);
    CHECK(la.vsyms.size() == 2);
    check_invariants(m, la);

    REQUIRE(la.lc_chain.size() == 2);
    REQUIRE(la.lc_chain[0].size() == 2);
    CHECK(la.lc_chain[0][0].expr == parse_expr("dot(u1,u1)/2", m));
    CHECK(la.lc_chain[0][1].expr == parse_expr("dot(u2,u2)/2", m));
    REQUIRE(la.lc_chain[1].size() == 1);
    CHECK(la.lc_chain[1][0].expr == parse_expr("dot(u1,u2)", m));
    check_chain_closure(m, la);
}

TEST_CASE("velocity-dependent closure is flagged, not absorbed") {
    Model m = load_model("secondclass");
    LagAnalysis la = analyze_lagrangian(m);
    CHECK(la.R == 0);
    check_invariants(m, la);

    REQUIRE(la.lc_chain.size() >= 1);
    REQUIRE(la.lc_chain[0].size() == 2);
    CHECK(la.lc_chain[0][0].expr == parse_expr("x1 + 2*u2", m));
    CHECK(la.lc_chain[0][1].expr == parse_expr("2*u1 - x2", m));
    CHECK(la.second_class);
    bool saw_signature = false;
    for (auto& lvl : la.lc_chain)
        for (auto& e : lvl)
            if (e.status == LCStatus::second_class_signature) saw_signature = true;
    CHECK(saw_signature);
}

TEST_CASE("chain order cap reports non-termination") {
    Model m = parse_model(
        "model \"capped\"\ncoords q1 q2 q3\nmax_order 1\n"
        "lagrangian u1*u2 - (1/2)*q3*q2^2\n");
    LagAnalysis la = analyze_lagrangian(m);
    CHECK_FALSE(la.chain_terminated);
}

TEST_CASE("whole corpus analyzes without throwing") {
    for (const char* name :
         {"cawley", "frenkel", "freeparticle", "secondclass", "relparticle_massive",
          "relparticle_massless", "bilocal"}) {
        CAPTURE(name);
        Model m = load_model(name);
        LagAnalysis la = analyze_lagrangian(m);
        check_invariants(m, la);
    }
}
