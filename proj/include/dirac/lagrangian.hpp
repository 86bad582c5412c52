#pragma once

#include "dirac/ideal.hpp"
#include "dirac/linalg.hpp"
#include "dirac/model.hpp"

namespace dirac {

enum class LCStatus { identity, new_constraint, second_class_signature };

struct LCEntry {
    Expr expr;
    LCStatus status;
};

struct LagAnalysis {
    std::vector<Expr> W;
    Matrix M;
    std::vector<Expr> omega;
    int R = 0;
    Matrix Qmat;
    std::vector<int> C_perm;
    std::vector<std::vector<Expr>> z;
    Matrix reduced;                          // Qmat * M * C_perm
    std::vector<int> vsyms;                  // one v^m per null direction
    std::vector<Expr> udot;                  // general solution, original order
    std::vector<std::vector<LCEntry>> lc_chain;  // index 0 = level 1
    bool second_class = false;
    bool chain_terminated = true;

    std::vector<Expr> accepted_lcs() const {
        std::vector<Expr> out;
        for (auto& lvl : lc_chain)
            for (auto& e : lvl)
                if (e.status == LCStatus::new_constraint) out.push_back(e.expr);
        return out;
    }
};

// W_A = dL/du^A, M_AB = dW_A/du^B, omega_A = (dW_A/dq^B)u^B - dL/dq^A.
void ele_decompose(const Model& m, std::vector<Expr>& W, Matrix& M, std::vector<Expr>& omega);

// General solution of the velocity equations of motion:
// udot^a determined, udot^m = v^m arbitrary.
void general_velocity_solution(const Model& m, LagAnalysis& la);

// Drop candidates lying in the ideal of earlier + already accepted ones.
std::vector<Expr> independence_filter(const std::vector<Expr>& cands,
                                      const std::vector<Expr>& earlier, int degree_cap = 12);

// Constraint chain via the evolution operator D; fills lc_chain/flags.
void lc_chain(const Model& m, LagAnalysis& la, int degree_cap = 12);

// Full Lagrangian-side pipeline.
LagAnalysis analyze_lagrangian(const Model& m, int degree_cap = 12);

} // namespace dirac
