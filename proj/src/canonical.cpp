#include "dirac/canonical.hpp"

#include "dirac/brackets.hpp"
#include "dirac/error.hpp"
#include "dirac/ideal.hpp"

namespace dirac {

namespace {

bool depends_on_velocities(const Expr& e, const Model& m) {
    for (int u : m.vels)
        if (e.depends_on(u)) return true;
    return false;
}

bool has_theta(const Expr& e) {
    std::set<int> vs;
    e.vars(vs);
    for (int v : vs) {
        SymKind k = sym_info(v).kind;
        if (k == SymKind::Theta || k == SymKind::ThetaPartial) return true;
    }
    return false;
}

std::map<int, Expr> velocity_binding(const Model& m, const std::vector<Expr>& Uhat) {
    std::map<int, Expr> bind;
    for (std::size_t a = 0; a < Uhat.size(); ++a) bind[m.vels[a]] = Uhat[a];
    return bind;
}

} // namespace

std::vector<Expr> solve_velocity(const Model& m, const LagAnalysis& la,
                                 std::vector<int>& theta_syms) {
    auto n = static_cast<std::size_t>(m.N);
    auto R = static_cast<std::size_t>(la.R);
    theta_syms.clear();

    bool affine = true;
    for (auto& row : la.M)
        for (auto& e : row)
            if (depends_on_velocities(e, m)) affine = false;

    if (affine) {
        // W = M(q) u + b(q); the sweep of M solves the regular directions.
        std::map<int, Expr> uzero;
        for (int u : m.vels) uzero[u] = Expr();
        std::vector<Expr> rhs(n);  // pi - b
        for (std::size_t a = 0; a < n; ++a)
            rhs[a] = Expr::symbol(m.moms[a]) - la.W[a].substitute(uzero);
        std::vector<Expr> t(n);  // Q (pi - b)
        for (std::size_t a = 0; a < n; ++a) {
            Expr acc;
            for (std::size_t b = 0; b < n; ++b) acc = acc + la.Qmat[a][b] * rhs[b];
            t[a] = acc;
        }
        std::vector<Expr> theta(n - R);
        for (std::size_t k = 0; k < n - R; ++k) {
            int id = sym("theta" + std::to_string(k + 1), SymKind::Theta,
                         static_cast<int>(k + 1));
            theta_syms.push_back(id);
            theta[k] = Expr::symbol(id);
        }
        std::vector<Expr> uhat(n);
        for (std::size_t a = 0; a < R; ++a) {
            Expr y = t[a];
            for (std::size_t k = R; k < n; ++k) y = y - la.reduced[a][k] * theta[k - R];
            uhat[static_cast<std::size_t>(la.C_perm[a])] = y;
        }
        for (std::size_t k = R; k < n; ++k)
            uhat[static_cast<std::size_t>(la.C_perm[k])] = theta[k - R];
        return uhat;
    }

    if (!m.provided_usolution)
        throw NonlinearNoUserSolution(
            "the momentum map is not affine in the velocities; a usolution "
            "directive is required for model '" + m.name + "'");
    std::vector<Expr> uhat = *m.provided_usolution;
    std::set<int> vs;
    for (auto& e : uhat) e.vars(vs);
    for (int v : vs)
        if (sym_info(v).kind == SymKind::Theta) theta_syms.push_back(v);

    // verify: pi_A - W_A(q, Uhat) must lie in the primary-constraint ideal
    std::vector<Expr> phi = primary_constraints(m, la, uhat);
    auto bind = velocity_binding(m, uhat);
    for (std::size_t a = 0; a < n; ++a) {
        Expr resid = Expr::symbol(m.moms[a]) - la.W[a].substitute(bind);
        if (!reduce_mod_ideal(resid, phi).is_zero())
            throw UserSolutionInvalid("provided velocity solution does not invert the "
                                      "momentum map at index " + std::to_string(a),
                                      static_cast<int>(a));
    }
    return uhat;
}

std::vector<Expr> primary_constraints(const Model& m, const LagAnalysis& la,
                                      const std::vector<Expr>& Uhat, int degree_cap) {
    auto n = static_cast<std::size_t>(m.N);
    auto bind = velocity_binding(m, Uhat);
    std::vector<Expr> cands;
    for (auto& zrow : la.z) {
        Expr acc;
        for (std::size_t a = 0; a < n; ++a)
            acc = acc + zrow[a] * (Expr::symbol(m.moms[a]) - la.W[a]);
        cands.push_back(constraint_representative(acc.substitute(bind)));
    }
    return independence_filter(cands, {}, degree_cap);
}

Expr hamiltonian(const Model& m, const std::vector<Expr>& Uhat) {
    auto n = static_cast<std::size_t>(m.N);
    Expr acc;
    for (std::size_t a = 0; a < n; ++a)
        acc = acc + Expr::symbol(m.moms[a]) * Uhat[a];
    return acc - m.lagrangian.substitute(velocity_binding(m, Uhat));
}

Expr tilde(const Expr& F, const Expr& H, const Model& m) {
    return F.dtau() + poisson(F, H, m);
}

void secondary_chain(CanAnalysis& can, const Model& m, int max_order, int degree_cap) {
    can.secondary_chain.clear();
    can.theta_in_chain = false;
    std::vector<Expr> gens = can.primaries;
    std::vector<Expr> current = can.primaries;
    while (!current.empty()) {
        std::vector<Expr> next;
        for (auto& chi : current) {
            Expr red = reduce_mod_ideal(tilde(chi, can.H, m), gens, degree_cap);
            if (red.is_zero()) continue;
            if (has_theta(red)) {
                // the consistency condition determines a theta instead of
                // yielding a new constraint; classification will expose the
                // second-class pair
                can.theta_in_chain = true;
                continue;
            }
            Expr rep = constraint_representative(red);
            if (reduce_mod_ideal(rep, gens, degree_cap).is_zero()) continue;
            next.push_back(rep);
            gens.push_back(rep);
        }
        if (next.empty()) break;
        int level = static_cast<int>(can.secondary_chain.size()) + 1;
        if (level > max_order)
            throw ChainNotTerminated("secondary chain still produces constraints at order " +
                                     std::to_string(level));
        can.secondary_chain.push_back(next);
        current = next;
    }
}

void classify(CanAnalysis& can, const Model& m, int degree_cap) {
    std::vector<Expr> all = can.all_constraints();
    std::size_t n = all.size();
    Ideal ideal(all, degree_cap);
    can.Xmat.assign(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Expr red = ideal.reduce(poisson(all[i], all[j], m));
            can.Xmat[i][j] = red;
            can.Xmat[j][i] = -red;
        }
    can.first_class.clear();
    can.second_class.clear();
    if (n == 0) {
        can.x_rank = 0;
        return;
    }
    SweepResult sw = sweep_out(can.Xmat);
    can.x_rank = sw.R;
    for (int j = 0; j < sw.R; ++j)
        can.second_class.push_back(all[static_cast<std::size_t>(sw.C_perm[static_cast<std::size_t>(j)])]);
    for (auto& zrow : sw.z) {
        Expr acc;
        for (std::size_t j = 0; j < n; ++j) acc = acc + zrow[j] * all[j];
        Expr rep = constraint_representative(acc);
        if (!rep.is_zero()) can.first_class.push_back(rep);
    }
}

Expr pullback(const Expr& F, const Model& m) {
    // the Lagrangian-side W is rebuilt locally so pullback needs no analysis
    std::map<int, Expr> bind;
    for (std::size_t a = 0; a < static_cast<std::size_t>(m.N); ++a)
        bind[m.moms[a]] = m.lagrangian.diff(m.vels[a]);
    return F.substitute(bind);
}

bool verify_secondary_equals_lc(const CanAnalysis& can, const LagAnalysis& la,
                                const Model& m, int degree_cap) {
    std::vector<std::vector<Expr>> lc_levels;
    for (auto& lvl : la.lc_chain) {
        std::vector<Expr> l;
        for (auto& e : lvl)
            if (e.status == LCStatus::new_constraint) l.push_back(e.expr);
        if (!l.empty()) lc_levels.push_back(l);
    }
    if (lc_levels.size() != can.secondary_chain.size()) return false;

    // membership in the radical sense: a function vanishes on the constraint
    // surface when some power of it lies in the ideal (pull-backs can pick up
    // squares, e.g. via collapsed square roots)
    auto surface_member = [degree_cap](const Expr& e, const std::vector<Expr>& gens) {
        Ideal ideal(gens, degree_cap);
        Expr p = e;
        for (int j = 1; j <= 4; ++j, p = p * e)
            if (ideal.reduce(p).is_zero()) return true;
        return false;
    };
    std::vector<Expr> pb_so_far, lc_so_far;
    for (std::size_t k = 0; k < lc_levels.size(); ++k) {
        std::vector<Expr> pb_level;
        for (auto& chi : can.secondary_chain[k]) pb_level.push_back(pullback(chi, m));
        for (auto& e : lc_levels[k]) lc_so_far.push_back(e);
        for (auto& e : pb_level) pb_so_far.push_back(e);
        for (auto& e : pb_level)
            if (!surface_member(e, lc_so_far)) return false;
        for (auto& e : lc_levels[k])
            if (!surface_member(e, pb_so_far)) return false;
    }
    return true;
}

void canonical_eom(const CanAnalysis& can, const Model& m,
                   std::vector<Expr>& qdot, std::vector<Expr>& pdot) {
    auto n = static_cast<std::size_t>(m.N);
    qdot.assign(n, Expr());
    pdot.assign(n, Expr());
    for (std::size_t a = 0; a < n; ++a) {
        qdot[a] = can.H.diff(m.moms[a]);
        pdot[a] = -can.H.diff(m.coords[a]);
    }
}

Expr dirac_bracket(const Expr& F, const Expr& G, const std::vector<Expr>& second_class,
                   const Model& m) {
    if (second_class.empty()) return poisson(F, G, m);
    std::size_t n = second_class.size();
    Matrix X(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            X[i][j] = poisson(second_class[i], second_class[j], m);
    Matrix Xinv = mat_inverse(X);
    Expr acc = poisson(F, G, m);
    for (std::size_t i = 0; i < n; ++i) {
        Expr fi = poisson(F, second_class[i], m);
        if (fi.is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (Xinv[i][j].is_zero()) continue;
            acc = acc - fi * Xinv[i][j] * poisson(second_class[j], G, m);
        }
    }
    return acc;
}

CanAnalysis analyze_canonical(const Model& m, const LagAnalysis& la, int degree_cap) {
    CanAnalysis can;
    can.Uhat = solve_velocity(m, la, can.theta_syms);
    can.primaries = primary_constraints(m, la, can.Uhat, degree_cap);
    can.H = hamiltonian(m, can.Uhat);
    secondary_chain(can, m, m.max_chain_order, degree_cap);
    classify(can, m, degree_cap);
    return can;
}

} // namespace dirac
