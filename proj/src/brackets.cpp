#include "dirac/brackets.hpp"

#include "dirac/ideal.hpp"

namespace dirac {

Expr poisson(const Expr& F, const Expr& G, const Model& m) {
    Expr acc;
    for (std::size_t a = 0; a < static_cast<std::size_t>(m.N); ++a) {
        acc = acc + F.diff(m.coords[a]) * G.diff(m.moms[a]);
        acc = acc - F.diff(m.moms[a]) * G.diff(m.coords[a]);
    }
    return acc;
}

BracketContext make_bracket_context(const Model& m, const Matrix& M,
                                    const std::vector<Expr>& Uhat) {
    BracketContext ctx;
    ctx.m = &m;
    ctx.Uhat = Uhat;
    std::map<int, Expr> bind;
    for (std::size_t a = 0; a < Uhat.size(); ++a) bind[m.vels[a]] = Uhat[a];
    ctx.M_at_Uhat.reserve(M.size());
    for (auto& row : M) {
        std::vector<Expr> r;
        r.reserve(row.size());
        for (auto& e : row) r.push_back(e.substitute(bind));
        ctx.M_at_Uhat.push_back(std::move(r));
    }
    return ctx;
}

Expr m_bracket(const BracketContext& ctx, const Expr& F, const Expr& G) {
    const Model& m = *ctx.m;
    auto n = static_cast<std::size_t>(m.N);
    std::vector<Expr> dF(n), dG(n);
    for (std::size_t a = 0; a < n; ++a) {
        dF[a] = F.diff(m.moms[a]);
        dG[a] = G.diff(m.moms[a]);
    }
    Expr acc;
    for (std::size_t a = 0; a < n; ++a) {
        if (dF[a].is_zero()) continue;
        for (std::size_t b = 0; b < n; ++b) {
            if (ctx.M_at_Uhat[a][b].is_zero() || dG[b].is_zero()) continue;
            acc = acc + ctx.M_at_Uhat[a][b] * dF[a] * dG[b];
        }
    }
    return acc;
}

Expr em_bracket(const BracketContext& ctx, const Expr& F, const Expr& G) {
    const Model& m = *ctx.m;
    auto n = static_cast<std::size_t>(m.N);
    Expr acc;
    for (std::size_t a = 0; a < n; ++a) {
        Expr dFa = F.diff(m.moms[a]);
        if (dFa.is_zero()) continue;
        for (std::size_t b = 0; b < n; ++b) {
            if (ctx.M_at_Uhat[a][b].is_zero()) continue;
            Expr inner = m_bracket(ctx, ctx.Uhat[b], G);
            if (inner.is_zero()) continue;
            acc = acc + ctx.M_at_Uhat[a][b] * dFa * inner;
        }
    }
    return acc;
}

ClassIAResult is_class_IA(const BracketContext& ctx, const std::vector<Expr>& constraints,
                          int degree_cap) {
    ClassIAResult res;
    Ideal ideal(constraints, degree_cap);
    std::size_t n = constraints.size();
    res.table.assign(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Expr red = ideal.reduce(m_bracket(ctx, constraints[i], constraints[j]));
            if (!red.is_zero()) res.class_ia = false;
            res.table[i][j] = red;
            res.table[j][i] = red;  // the M-bracket is symmetric
        }
    return res;
}

} // namespace dirac
