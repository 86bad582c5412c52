#pragma once

#include "dirac/lagrangian.hpp"
#include "dirac/linalg.hpp"
#include "dirac/model.hpp"

namespace dirac {

// The canonical picture built on top of a Lagrangian analysis.
struct CanAnalysis {
    std::vector<Expr> Uhat;        // velocity solution over (q, pi, theta)
    std::vector<int> theta_syms;   // arbitrary functions filling null directions
    std::vector<Expr> primaries;   // phi_n
    Expr H;
    std::vector<std::vector<Expr>> secondary_chain;  // index 0 = level 1
    bool theta_in_chain = false;   // a consistency condition fixed a theta
    Matrix Xmat;                   // mutual Poisson brackets mod constraints
    int x_rank = 0;
    std::vector<Expr> first_class;   // representatives (kernel combinations)
    std::vector<Expr> second_class;  // complement constraints

    std::vector<Expr> all_constraints() const {
        std::vector<Expr> out = primaries;
        for (auto& lvl : secondary_chain)
            for (auto& c : lvl) out.push_back(c);
        return out;
    }
    std::vector<Expr> secondaries() const {
        std::vector<Expr> out;
        for (auto& lvl : secondary_chain)
            for (auto& c : lvl) out.push_back(c);
        return out;
    }
};

// Solve pi_A = W_A(q,u) for u. When W is affine in u the regular directions
// are solved linearly and the null directions become fresh theta symbols;
// otherwise a model-provided solution is required and verified.
// Throws NonlinearNoUserSolution / UserSolutionInvalid.
std::vector<Expr> solve_velocity(const Model& m, const LagAnalysis& la,
                                 std::vector<int>& theta_syms);

// phi_n = [z^(n) . (pi - W)] at u = Uhat, normalized and filtered.
std::vector<Expr> primary_constraints(const Model& m, const LagAnalysis& la,
                                      const std::vector<Expr>& Uhat, int degree_cap = 12);

// H = pi_A Uhat^A - L(q, Uhat).
Expr hamiltonian(const Model& m, const std::vector<Expr>& Uhat);

// F~ = dF/dtau + {F, H}.
Expr tilde(const Expr& F, const Expr& H, const Model& m);

// Iterate the tilde operator from the primaries, reducing each level against
// everything accepted so far. theta-dependent conditions fix thetas instead of
// producing constraints and set theta_in_chain. Throws ChainNotTerminated.
void secondary_chain(CanAnalysis& can, const Model& m, int max_order, int degree_cap = 12);

// X_ij = reduce({c_i,c_j}) over all constraints; symbolic rank splits the set
// into first-class kernel combinations and second-class complement.
void classify(CanAnalysis& can, const Model& m, int degree_cap = 12);

// Substitute pi_A -> W_A(q,u).
Expr pullback(const Expr& F, const Model& m);

// Level-wise mutual ideal membership between pulled-back secondary
// constraints and the Lagrangian constraint chain.
bool verify_secondary_equals_lc(const CanAnalysis& can, const LagAnalysis& la,
                                const Model& m, int degree_cap = 12);

// qdot^A = dH/dpi_A, pdot_A = -dH/dq^A.
void canonical_eom(const CanAnalysis& can, const Model& m,
                   std::vector<Expr>& qdot, std::vector<Expr>& pdot);

// {F,G} - {F,c_i}(X^-1)_ij{c_j,G} for a fully second-class set.
// Throws XNotInvertible.
Expr dirac_bracket(const Expr& F, const Expr& G, const std::vector<Expr>& second_class,
                   const Model& m);

// Full pipeline: velocities, primaries, Hamiltonian, chain, classification.
CanAnalysis analyze_canonical(const Model& m, const LagAnalysis& la, int degree_cap = 12);

} // namespace dirac
