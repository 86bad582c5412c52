#pragma once

#include <map>
#include <string>
#include <vector>

#include "dirac/brackets.hpp"
#include "dirac/canonical.hpp"
#include "dirac/lagrangian.hpp"

namespace dirac {

// Generator linear and homogeneous in the constraints: one fresh
// tau-dependent parameter per constraint. Secondary terms carry the weights
// declared by the model (dtr_weight), primaries get eta-parameters.
struct DtrGenerator {
    Expr Q;
    std::vector<int> eta_params;  // one per primary constraint
    std::vector<int> eps_params;  // one per secondary constraint, discovery order
};

DtrGenerator build_dtr(const Model& m, const CanAnalysis& can);

// tilde(Q) mod primaries expressed over the secondary constraints (discovery
// order); coefficients may themselves contain constraints. Throws
// DecompositionFailed when an inexpressible remainder survives.
std::vector<Expr> q_tilde_decompose(const Expr& Q, const Model& m, const CanAnalysis& can,
                                    int degree_cap = 12);

// Canonical gauge transformation: tilde(Q) vanishes modulo the primaries.
bool is_cgtr(const Expr& Q, const Model& m, const CanAnalysis& can, int degree_cap = 12);

// The parameter equations characterizing the canonical gauge family: the
// per-secondary coefficients of the decomposition of tilde(Q), each of which
// must vanish.
std::vector<Expr> cgtr_family(const DtrGenerator& dtr, const Model& m,
                              const CanAnalysis& can, int degree_cap = 12);

enum class Verdict { PETR_ALL, PETR_EXCEPT, NOT_PETR, INCONCLUSIVE };

std::string verdict_name(Verdict v);

struct ConjectureReport {
    bool class_ia = false;
    // decomposition coefficients of tilde(Q) over the secondaries
    std::vector<Expr> qtilde_coeffs;
    // residuals of the constraint-preservation and equation-of-motion
    // conditions, with the xi-unknowns still symbolic, reduced mod constraints
    std::vector<Expr> cond1_residuals;
    std::vector<Expr> cond2_residuals;
    // assignments found for the xi-unknowns (by symbol id)
    std::map<int, Expr> xi_solution;
    // equations on (parameters, Xi-replacements) left by the extended stage
    std::vector<Expr> xi_equations;
    Verdict verdict = Verdict::INCONCLUSIVE;
    Expr witness;  // NOT_PETR: parameter expression that cannot vanish
    Expr locus;    // PETR_EXCEPT: parameter equation of the exceptional family
    std::string reason;  // INCONCLUSIVE
};

// Decide whether the transformation generated by dtr.Q maps states to
// physically equivalent states, solving for the free momenta coefficients
// xi^m (and, in the extended stage, for replacements Xi^m of the unphysical
// coordinates). Throws SecondClassPresent.
ConjectureReport petr_check(const DtrGenerator& dtr, const Model& m, const LagAnalysis& la,
                            const CanAnalysis& can, const BracketContext& ctx,
                            int degree_cap = 12);

} // namespace dirac
