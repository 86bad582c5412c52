#pragma once

#include "dirac/lagrangian.hpp"
#include "dirac/model.hpp"

namespace dirac {

// {F,G} = sum_A dF/dq^A dG/dpi_A - dF/dpi_A dG/dq^A.
Expr poisson(const Expr& F, const Expr& G, const Model& m);

// Degeneracy data for the Hessian-weighted brackets: the Hessian evaluated on
// the velocity solution, M_AB(q, Uhat(q,pi)).
struct BracketContext {
    const Model* m = nullptr;
    std::vector<Expr> Uhat;
    Matrix M_at_Uhat;
};

BracketContext make_bracket_context(const Model& m, const Matrix& M,
                                    const std::vector<Expr>& Uhat);

// {F,G}_M = M_AB(q,Uhat) dF/dpi_A dG/dpi_B.
Expr m_bracket(const BracketContext& ctx, const Expr& F, const Expr& G);

// {F,G}_EM = M_AB(q,Uhat) dF/dpi_A {Uhat^B, G}_M.
Expr em_bracket(const BracketContext& ctx, const Expr& F, const Expr& G);

struct ClassIAResult {
    bool class_ia = true;
    // reduced M-brackets, table[i][j] = reduce({c_i,c_j}_M, constraints)
    std::vector<std::vector<Expr>> table;
};

// A first-class constraint set is of class IA when it also closes under the
// M-bracket, i.e. every pairwise M-bracket vanishes modulo the constraints.
ClassIAResult is_class_IA(const BracketContext& ctx, const std::vector<Expr>& constraints,
                          int degree_cap = 12);

} // namespace dirac
