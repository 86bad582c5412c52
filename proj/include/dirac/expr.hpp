#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dirac/symbols.hpp"

namespace dirac {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// A power product. Factors are sorted so the greatest variable (smallest
// sym_key) comes first; exponents are strictly positive.
struct Monomial {
    std::vector<std::pair<int, int>> f;  // (symbol id, exponent)

    int deg() const;
    bool divides(const Monomial& other) const;
    bool contains(int symbol) const;
    int exponent(int symbol) const;
    bool operator==(const Monomial&) const = default;
};

Monomial mono_mul(const Monomial& a, const Monomial& b);
Monomial mono_div(const Monomial& a, const Monomial& b);  // requires b | a
Monomial mono_gcd(const Monomial& a, const Monomial& b);
// Graded lex: +1 when a > b, -1 when a < b, 0 when equal.
int mono_cmp(const Monomial& a, const Monomial& b);

// Expanded polynomial: terms sorted descending (leading term first),
// coefficients nonzero exact rationals.
struct Poly {
    std::vector<std::pair<Monomial, Rat>> t;

    bool is_zero() const { return t.empty(); }
    bool is_constant() const;
    int deg() const;
    const Monomial& lead_mono() const { return t.front().first; }
    const Rat& lead_coeff() const { return t.front().second; }
    bool operator==(const Poly&) const = default;

    static Poly zero() { return {}; }
    static Poly constant(const Rat& c);
    static Poly variable(int symbol);
};

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const Rat& c);
Poly poly_mul_term(const Poly& a, const Monomial& m, const Rat& c);
// Exact division; returns false when b does not divide a.
bool poly_divexact(const Poly& a, const Poly& b, Poly& quot);
void poly_vars(const Poly& a, std::set<int>& out);
// Rewrite every occurrence of the base of each radical in `rads` into the
// radical power (b -> r^deg), enforcing the base-elimination invariant.
Poly poly_radical_rewrite(const Poly& a, const std::set<int>& rads);
std::string poly_str(const Poly& a);

// Immutable symbolic expression: a normalized rational function num/den with
// monic denominator. All arithmetic normalizes eagerly.
class Expr {
  public:
    Expr();  // zero
    static Expr integer(long v);
    static Expr rational(const Rat& v);
    static Expr symbol(int id);
    static Expr symbol(const std::string& name);  // must already exist
    static Expr make(Poly num, Poly den);

    Expr operator+(const Expr&) const;
    Expr operator-(const Expr&) const;
    Expr operator-() const;
    Expr operator*(const Expr&) const;
    Expr operator/(const Expr&) const;  // throws DivisionByZero
    Expr pow(long e) const;
    Expr root(long k) const;  // k-th root; limited to symbols/constants/terms

    Expr diff(int symbol) const;
    Expr substitute(const std::map<int, Expr>& bindings) const;

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;       // no variables
    Rat rational_value() const;     // requires is_rational()
    bool operator==(const Expr& o) const;
    bool operator!=(const Expr& o) const { return !(*this == o); }

    const Poly& num() const;
    const Poly& den() const;
    void vars(std::set<int>& out) const;
    bool depends_on(int symbol) const;
    // num is a single term whose variables are all certified nonzero (and den
    // likewise), so the expression is provably nonzero under the assumptions.
    bool provably_nonzero() const;

    // d/dtau treating parameter-like symbols as functions of tau and free
    // functions as tau-dependent; phase-space symbols are held fixed.
    Expr dtau() const { return diff(sym_tau()); }

    std::string str() const;

  private:
    explicit Expr(std::shared_ptr<const std::pair<Poly, Poly>> p) : p_(std::move(p)) {}
    std::shared_ptr<const std::pair<Poly, Poly>> p_;
};

inline Expr operator+(long a, const Expr& b) { return Expr::integer(a) + b; }
inline Expr operator-(long a, const Expr& b) { return Expr::integer(a) - b; }
inline Expr operator*(long a, const Expr& b) { return Expr::integer(a) * b; }
inline Expr operator/(const Expr& a, long b) { return a / Expr::integer(b); }

// Identity on the already-canonical representation; exposed for symmetry
// with the rest of the API and for idempotence tests.
inline Expr normalize(const Expr& e) { return e; }

Expr diff(const Expr& e, int symbol);
Expr substitute(const Expr& e, const std::map<int, Expr>& bindings);
bool is_zero(const Expr& e);

} // namespace dirac
