#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dirac {

// Symbol kinds, in precedence order for the graded-lex term order: a kind
// earlier in this enum makes a lexicographically *greater* variable.
enum class SymKind {
    Coord,        // q^A
    Vel,          // u^A
    Mom,          // pi_A
    Radical,      // r with r^deg = base symbol
    Theta,        // free function theta^m(q, pi, tau)
    ThetaPartial, // opaque partial derivative of a Theta
    VSym,         // arbitrary v^m(tau) in the general velocity solution
    Xi,           // auxiliary Xi^m replacing an unphysical coordinate
    XiUnk,        // unknown xi^m in the conjecture conditions
    Param,        // transformation parameter eps/eta (function of tau)
    Const,        // model constant (kappa, m, ...)
    Tau,          // explicit time
};

struct SymInfo {
    std::string name;  // unique display name, e.g. "q1", "pq1", "eps2~~"
    SymKind kind;
    int index = 0;     // ordering index within the kind
    int tilde = 0;     // tilde order for Param/Xi/XiUnk
    int radical_base = -1;
    int radical_deg = 0;
    int partial_of = -1;           // root Theta for ThetaPartial
    std::vector<int> partial_wrt;  // sorted, with multiplicity
    bool nonzero = false;
    bool positive = false;
};

// Global, append-only symbol registry. Find-or-create by display name;
// safe for concurrent use.
int sym(const std::string& name, SymKind kind, int index = 0);
int sym_lookup(const std::string& name);  // -1 when absent
const SymInfo& sym_info(int id);
std::uint64_t sym_key(int id);  // smaller key = greater variable

// tau singleton
int sym_tau();

// The tilde-order-(n+1) companion of a Param/Xi/XiUnk symbol.
int sym_tilde_next(int id);

// r with r^deg = base (base must be Coord/Mom/Const); nested radicals merge.
int sym_radical(int base, int deg);

// Opaque partial of a Theta (or a deeper partial) w.r.t. symbol `wrt`.
int sym_partial(int of, int wrt);

void sym_assume(int id, bool nonzero, bool positive);

// True when the symbol is certified nonzero: declared nonzero/positive, or a
// radical over a positive base.
bool sym_certified_nonzero(int id);

} // namespace dirac
