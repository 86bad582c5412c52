#include "dirac/lagrangian.hpp"

#include "dirac/error.hpp"

namespace dirac {

void ele_decompose(const Model& m, std::vector<Expr>& W, Matrix& M, std::vector<Expr>& omega) {
    auto n = static_cast<std::size_t>(m.N);
    W.assign(n, Expr());
    omega.assign(n, Expr());
    M.assign(n, std::vector<Expr>(n));
    for (std::size_t a = 0; a < n; ++a) W[a] = m.lagrangian.diff(m.vels[a]);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) M[a][b] = W[a].diff(m.vels[b]);
    for (std::size_t a = 0; a < n; ++a) {
        Expr acc;
        for (std::size_t b = 0; b < n; ++b)
            acc = acc + W[a].diff(m.coords[b]) * Expr::symbol(m.vels[b]);
        omega[a] = acc - m.lagrangian.diff(m.coords[a]);
    }
}

void general_velocity_solution(const Model& m, LagAnalysis& la) {
    auto n = static_cast<std::size_t>(m.N);
    auto R = static_cast<std::size_t>(la.R);
    // fresh arbitrary functions v^m, one per null (permuted) direction
    la.vsyms.clear();
    std::vector<Expr> v_for_col(n);  // by permuted column index
    for (std::size_t k = R; k < n; ++k) {
        int orig = la.C_perm[k];
        int vs = sym("v_" + sym_info(m.coords[static_cast<std::size_t>(orig)]).name,
                     SymKind::VSym, orig + 1);
        la.vsyms.push_back(vs);
        v_for_col[k] = Expr::symbol(vs);
    }
    // Q * omega
    std::vector<Expr> qomega(n);
    for (std::size_t a = 0; a < n; ++a) {
        Expr acc;
        for (std::size_t b = 0; b < n; ++b) acc = acc + la.Qmat[a][b] * la.omega[b];
        qomega[a] = acc;
    }
    la.udot.assign(n, Expr());
    for (std::size_t a = 0; a < R; ++a) {
        Expr acc = -qomega[a];
        for (std::size_t k = R; k < n; ++k)
            acc = acc - la.reduced[a][k] * v_for_col[k];  // N-block entries
        la.udot[static_cast<std::size_t>(la.C_perm[a])] = acc;
    }
    for (std::size_t k = R; k < n; ++k)
        la.udot[static_cast<std::size_t>(la.C_perm[k])] = v_for_col[k];
}

std::vector<Expr> independence_filter(const std::vector<Expr>& cands,
                                      const std::vector<Expr>& earlier, int degree_cap) {
    std::vector<Expr> accepted;
    std::vector<Expr> gens = earlier;
    for (auto& c : cands) {
        if (c.is_zero()) continue;
        if (reduce_mod_ideal(c, gens, degree_cap).is_zero()) continue;
        accepted.push_back(c);
        gens.push_back(c);
    }
    return accepted;
}

namespace {

Expr apply_D(const Model& m, const LagAnalysis& la, const Expr& f) {
    Expr acc;
    auto n = static_cast<std::size_t>(m.N);
    for (std::size_t a = 0; a < n; ++a) {
        acc = acc + Expr::symbol(m.vels[a]) * f.diff(m.coords[a]);
        acc = acc + la.udot[a] * f.diff(m.vels[a]);
    }
    return acc;
}

bool has_vsym(const Expr& e, const LagAnalysis& la) {
    std::set<int> vs;
    e.vars(vs);
    for (int v : la.vsyms)
        if (vs.count(v)) return true;
    return false;
}

} // namespace

void lc_chain(const Model& m, LagAnalysis& la, int degree_cap) {
    la.lc_chain.clear();
    la.second_class = false;
    la.chain_terminated = true;
    // level 1: independent nonzero members of z . omega
    std::vector<Expr> level1_cands;
    for (auto& zrow : la.z) {
        Expr acc;
        for (std::size_t b = 0; b < zrow.size(); ++b) acc = acc + zrow[b] * la.omega[b];
        level1_cands.push_back(constraint_representative(acc));
    }
    std::vector<Expr> accepted;
    std::vector<LCEntry> lvl;
    for (auto& c : independence_filter(level1_cands, {}, degree_cap)) {
        lvl.push_back({c, LCStatus::new_constraint});
        accepted.push_back(c);
    }
    if (lvl.empty()) return;
    la.lc_chain.push_back(lvl);

    int level = 1;
    while (true) {
        if (level >= m.max_chain_order) {
            la.chain_terminated = false;
            break;
        }
        std::vector<LCEntry> next;
        std::vector<Expr> accepted_this_level;
        bool any_new = false;
        for (auto& entry : la.lc_chain.back()) {
            if (entry.status != LCStatus::new_constraint) continue;
            Expr cand = apply_D(m, la, entry.expr);
            std::vector<Expr> gens = accepted;
            for (auto& e : accepted_this_level) gens.push_back(e);
            Expr red = reduce_mod_ideal(cand, gens, degree_cap);
            if (red.is_zero()) continue;
            if (has_vsym(red, la)) {
                next.push_back({red, LCStatus::second_class_signature});
                la.second_class = true;
                continue;
            }
            Expr rep = constraint_representative(red);
            next.push_back({rep, LCStatus::new_constraint});
            accepted_this_level.push_back(rep);
            any_new = true;
        }
        if (next.empty()) break;
        la.lc_chain.push_back(next);
        for (auto& e : accepted_this_level) accepted.push_back(e);
        if (la.second_class && !any_new) break;
        if (la.second_class) break;
        ++level;
    }
}

LagAnalysis analyze_lagrangian(const Model& m, int degree_cap) {
    LagAnalysis la;
    ele_decompose(m, la.W, la.M, la.omega);
    try {
        SweepResult sw = sweep_out(la.M);
        la.R = sw.R;
        la.Qmat = std::move(sw.Qmat);
        la.C_perm = std::move(sw.C_perm);
        la.z = std::move(sw.z);
        la.reduced = std::move(sw.reduced);
    } catch (const Inconclusive& ex) {
        throw PivotUndecidable(ex.what());
    }
    general_velocity_solution(m, la);
    lc_chain(m, la, degree_cap);
    return la;
}

} // namespace dirac
