#include "dirac/transform.hpp"

#include "dirac/brackets.hpp"
#include "dirac/error.hpp"
#include "dirac/ideal.hpp"

namespace dirac {

bool check_ltr(const std::vector<Expr>& eps, const Model& m, const LagAnalysis& la) {
    auto n = static_cast<std::size_t>(m.N);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            Expr diff;
            for (std::size_t c = 0; c < n; ++c)
                diff = diff + la.M[a][c] * eps[c].diff(m.vels[b]) -
                       la.M[b][c] * eps[c].diff(m.vels[a]);
            if (!diff.is_zero()) return false;
        }
    return true;
}

Expr delta_l(const std::vector<Expr>& eps, const Expr& E, const Model& m) {
    auto n = static_cast<std::size_t>(m.N);
    std::vector<Expr> W(n);
    for (std::size_t a = 0; a < n; ++a) W[a] = m.lagrangian.diff(m.vels[a]);

    for (std::size_t b = 0; b < n; ++b) {
        Expr cond = E.diff(m.vels[b]);
        for (std::size_t a = 0; a < n; ++a) cond = cond - W[a] * eps[a].diff(m.vels[b]);
        if (!cond.is_zero())
            throw AssociatedFunctionMissing(
                "associated function does not absorb the udot-dependence in the "
                "u^" + std::to_string(b + 1) + " direction");
    }

    Expr dl;
    for (std::size_t a = 0; a < n; ++a)
        dl = dl + m.lagrangian.diff(m.coords[a]) * eps[a] + W[a] * eps[a].dtau();
    for (std::size_t b = 0; b < n; ++b) {
        Expr coef = -E.diff(m.coords[b]);
        for (std::size_t a = 0; a < n; ++a) coef = coef + W[a] * eps[a].diff(m.coords[b]);
        dl = dl + coef * Expr::symbol(m.vels[b]);
    }
    return dl - E.dtau();
}

bool is_sgtr(const LagTransform& lt, const LagAnalysis& la, int degree_cap) {
    return reduce_mod_ideal(lt.deltaL, la.accepted_lcs(), degree_cap).is_zero();
}

LagTransform pullback_htr(const Expr& Q, const Model& m, const LagAnalysis& la) {
    auto n = static_cast<std::size_t>(m.N);
    LagTransform lt;
    Expr Ehat = -Q;
    lt.eps.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        Expr d = Q.diff(m.moms[a]);
        lt.eps[a] = pullback(d, m);
        Ehat = Ehat + Expr::symbol(m.moms[a]) * d;
    }
    lt.E = pullback(Ehat, m);
    if (!check_ltr(lt.eps, m, la))
        throw VerificationFailed("pulled-back transformation fails the integrability "
                                 "condition");
    try {
        lt.deltaL = delta_l(lt.eps, *lt.E, m);
    } catch (const AssociatedFunctionMissing& e) {
        throw VerificationFailed(std::string("pulled-back associated function invalid: ") +
                                 e.what());
    }
    return lt;
}

Expr verify_appendix_identity(const Expr& Q, const Model& m, const LagAnalysis& la,
                              const CanAnalysis& can, int degree_cap) {
    LagTransform lt = pullback_htr(Q, m, la);
    std::map<int, Expr> bind;
    for (std::size_t a = 0; a < can.Uhat.size(); ++a) bind[m.vels[a]] = can.Uhat[a];
    // For generators without explicit time dependence this is
    // {H,Q} + deltaL|_U; the dQ/dtau term extends the identity to
    // time-dependent parameters (deltaL carries their derivatives).
    Expr resid = poisson(can.H, Q, m) + lt.deltaL.substitute(bind) - Q.dtau();
    return reduce_mod_ideal(resid, can.primaries, degree_cap);
}

} // namespace dirac
