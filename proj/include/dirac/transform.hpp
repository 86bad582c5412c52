#pragma once

#include <optional>
#include <vector>

#include "dirac/canonical.hpp"
#include "dirac/lagrangian.hpp"

namespace dirac {

// A velocity-dependent infinitesimal transformation delta q^A = eps^A(q,u,tau)
// (with delta u^A its total time derivative), its associated function E
// absorbing the udot-dependence of the Lagrangian variation, and the residual
// variation deltaL with total derivatives split off.
struct LagTransform {
    std::vector<Expr> eps;
    std::optional<Expr> E;
    Expr deltaL;
};

// Integrability of the udot-dependent part: M_AC deps^C/du^B must be
// symmetric under A <-> B. True iff an associated function E exists.
bool check_ltr(const std::vector<Expr>& eps, const Model& m, const LagAnalysis& la);

// Variation of the Lagrangian with total derivatives dropped:
//   dL/dq^A eps^A + W_A deps^A/dtau + (W_A deps^A/dq^B - dE/dq^B) u^B - dE/dtau.
// E is first verified against dE/du^B = W_A deps^A/du^B; throws
// AssociatedFunctionMissing when it fails.
Expr delta_l(const std::vector<Expr>& eps, const Expr& E, const Model& m);

// deltaL vanishes modulo the accepted Lagrangian constraints.
bool is_sgtr(const LagTransform& lt, const LagAnalysis& la, int degree_cap = 12);

// Pull a phase-space generator back to velocity space:
//   eps^A = (dQ/dpi_A)|pi->W,   E = (pi_A dQ/dpi_A - Q)|pi->W,
// then verify integrability and compute deltaL. Throws VerificationFailed.
LagTransform pullback_htr(const Expr& Q, const Model& m, const LagAnalysis& la);

// Residual of {H,Q} + deltaL|_{u=Uhat} - dQ/dtau reduced modulo the primary
// constraints; zero certifies the variation identity for the pulled-back
// transformation (equivalently: deltaL|_{u=Uhat} equals the canonical time
// derivative of Q modulo primaries).
Expr verify_appendix_identity(const Expr& Q, const Model& m, const LagAnalysis& la,
                              const CanAnalysis& can, int degree_cap = 12);

} // namespace dirac
