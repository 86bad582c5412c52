#pragma once

#include <memory>
#include <vector>

#include "dirac/expr.hpp"

namespace dirac {

struct LBasis;  // internal: generators over the localized coefficient field

// Ideal of an equational context ("mod constraints"). Generators are the
// numerators of the given expressions, unified on radical representations and
// saturated so that a radical symbol whose power lies in the ideal is itself a
// generator (membership here means vanishing on the constraint surface).
// Certified-nonzero model constants are invertible everywhere on phase space,
// so all arithmetic runs over the field of rational functions in them:
// monomials carry only dynamical variables and the constants live in the
// coefficients. Plain lead-term division is tried first; when it leaves a
// nonzero remainder a reduced Groebner basis (Buchberger) is computed once
// and cached.
class Ideal {
  public:
    Ideal() = default;
    explicit Ideal(std::vector<Expr> gens, int degree_cap = 12);

    // Canonical normal form of e modulo the ideal; 0 certifies membership.
    // Throws DegreeCapExceeded when a nonzero result would need a basis
    // completion that the degree cap forbids. In best-effort mode the plain
    // division normal form is returned instead: still exact, zero still
    // certifies membership, but a nonzero result may not be canonical.
    Expr reduce(const Expr& e) const;
    Expr reduce(const Expr& e, bool best_effort) const;
    bool contains(const Expr& e) const { return reduce(e).is_zero(); }
    bool empty() const { return gens_.empty(); }
    const std::vector<Poly>& generators() const { return gens_; }
    int degree_cap() const { return cap_; }

  private:
    const LBasis& localized() const;
    const LBasis& groebner() const;
    std::vector<Poly> gens_;
    int cap_ = 12;
    mutable std::shared_ptr<const LBasis> lgens_;
    mutable std::shared_ptr<const LBasis> gb_;
    mutable bool gb_failed_ = false;  // completion exceeded the degree cap
};

// Spec-level convenience wrapper.
Expr reduce_mod_ideal(const Expr& e, const std::vector<Expr>& gens, int degree_cap = 12);

// Remainder of dividing p by divisors (in order) under graded lex. No
// Groebner completion; used where the quotients matter.
Poly poly_reduce(const Poly& p, const std::vector<Poly>& divisors, int degree_cap);

// Division of e by the given constraint expressions allowing, for a
// single-term divisor, quotients with negative powers of nonzero radicals.
// Returns per-divisor quotient coefficients; `remainder` gets what is left.
std::vector<Expr> radical_aware_divide(const Expr& e, const std::vector<Expr>& divisors,
                                       Expr& remainder);

// Preferred representative of a constraint inside its own ideal: nonzero
// monomial factors stripped, integer content of the numerator removed, sign
// oriented so the trailing monomial has a positive coefficient, and a
// single-term result collapsed along exponents and radicals.
Expr constraint_representative(const Expr& e);

} // namespace dirac
