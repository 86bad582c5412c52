#include "dirac/report.hpp"

#include <sstream>

#include <json.hpp>

#include "dirac/ideal.hpp"
#include "dirac/symbols.hpp"

namespace dirac {

namespace {

using ordered_json = nlohmann::ordered_json;

// Sign-stable display: flip an expression whose leading coefficient is
// negative, so e.g. a locus prints as "eps1 - eps2" rather than its negation.
std::string oriented(const Expr& e) {
    if (!e.is_zero() && e.num().lead_coeff() < 0) return (Expr::integer(-1) * e).str();
    return e.str();
}

ordered_json chain_json(const std::vector<std::vector<Expr>>& chain) {
    ordered_json out = ordered_json::array();
    for (std::size_t lvl = 0; lvl < chain.size(); ++lvl)
        for (auto& e : chain[lvl])
            out.push_back(ordered_json::array({static_cast<int>(lvl) + 1, e.str()}));
    return out;
}

ordered_json exprs_json(const std::vector<Expr>& v) {
    ordered_json out = ordered_json::array();
    for (auto& e : v) out.push_back(e.str());
    return out;
}

ordered_json bracket_table(const RunReport& r, bool use_m) {
    const CanAnalysis& can = *r.can;
    std::vector<Expr> cs = can.all_constraints();
    Ideal ideal(cs, r.m.degree_cap);
    BracketContext ctx = make_bracket_context(r.m, r.la->M, can.Uhat);
    ordered_json out = ordered_json::array();
    for (auto& a : cs) {
        ordered_json row = ordered_json::array();
        for (auto& b : cs) {
            Expr v = use_m ? m_bracket(ctx, a, b) : poisson(a, b, r.m);
            row.push_back(ideal.reduce(v, true).str());
        }
        out.push_back(row);
    }
    return out;
}

ordered_json conjecture_json(const RunReport& r) {
    ordered_json c;
    if (!r.conjecture) {
        c["verdict"] = "INCONCLUSIVE";
        if (!r.skip_reason.empty()) c["reason"] = r.skip_reason;
        return c;
    }
    const ConjectureReport& rep = *r.conjecture;
    c["verdict"] = verdict_name(rep.verdict);
    if (rep.verdict == Verdict::NOT_PETR) c["witness"] = rep.witness.str();
    if (!rep.xi_solution.empty()) {
        ordered_json xi;
        for (auto& [id, val] : rep.xi_solution) xi[sym_info(id).name] = val.str();
        c["xi"] = xi;
    }
    if (rep.verdict == Verdict::PETR_EXCEPT) {
        c["locus"] = oriented(rep.locus);
        ordered_json eqs = ordered_json::array();
        for (auto& e : rep.xi_equations) eqs.push_back(e.str());
        c["equations"] = eqs;
    }
    if (rep.verdict == Verdict::INCONCLUSIVE && !rep.reason.empty())
        c["reason"] = rep.reason;
    return c;
}

} // namespace

std::string emit_json(const RunReport& r) {
    ordered_json j;
    j["model"] = r.model;
    if (r.la) {
        j["rank"] = r.la->R;
        j["null_count"] = static_cast<int>(r.la->z.size());
        ordered_json lcs = ordered_json::array();
        for (std::size_t lvl = 0; lvl < r.la->lc_chain.size(); ++lvl)
            for (auto& e : r.la->lc_chain[lvl])
                if (e.status == LCStatus::new_constraint)
                    lcs.push_back(
                        ordered_json::array({static_cast<int>(lvl) + 1, e.expr.str()}));
        j["lagrangian_constraints"] = lcs;
    }
    if (r.can) {
        j["primaries"] = exprs_json(r.can->primaries);
        j["hamiltonian"] = r.can->H.str();
        j["secondaries"] = chain_json(r.can->secondary_chain);
        ordered_json cls;
        cls["first"] = exprs_json(r.can->first_class);
        cls["second"] = exprs_json(r.can->second_class);
        j["class"] = cls;
        if (r.class_ia) j["class_ia"] = *r.class_ia;
        if (r.with_brackets) {
            ordered_json br;
            br["poisson"] = bracket_table(r, false);
            br["m"] = bracket_table(r, true);
            j["brackets"] = br;
        }
        if (r.conjecture || !r.skip_reason.empty())
            j["conjecture"] = conjecture_json(r);
    }
    return j.dump(2) + "\n";
}

std::string render_text(const RunReport& r) {
    std::ostringstream os;
    os << "model: " << r.model << "\n";
    if (r.la) {
        os << "hessian rank: " << r.la->R << ", null directions: " << r.la->z.size()
           << "\n";
        for (std::size_t lvl = 0; lvl < r.la->lc_chain.size(); ++lvl)
            for (auto& e : r.la->lc_chain[lvl])
                if (e.status == LCStatus::new_constraint)
                    os << "lagrangian constraint (level " << lvl + 1
                       << "): " << e.expr.str() << "\n";
    }
    if (r.can) {
        for (auto& p : r.can->primaries) os << "primary: " << p.str() << "\n";
        os << "hamiltonian: " << r.can->H.str() << "\n";
        for (std::size_t lvl = 0; lvl < r.can->secondary_chain.size(); ++lvl)
            for (auto& e : r.can->secondary_chain[lvl])
                os << "secondary (level " << lvl + 1 << "): " << e.str() << "\n";
        os << "first class: " << r.can->first_class.size()
           << ", second class: " << r.can->second_class.size() << "\n";
        if (r.class_ia) os << "class IA: " << (*r.class_ia ? "yes" : "no") << "\n";
    }
    if (r.conjecture) {
        const ConjectureReport& rep = *r.conjecture;
        os << "verdict: " << verdict_name(rep.verdict) << "\n";
        if (rep.verdict == Verdict::NOT_PETR)
            os << "witness: " << rep.witness.str() << "\n";
        for (auto& [id, val] : rep.xi_solution)
            os << "momentum coefficient " << sym_info(id).name << " = " << val.str()
               << "\n";
        if (rep.verdict == Verdict::PETR_EXCEPT) {
            os << "exceptional locus: " << oriented(rep.locus) << " = 0\n";
            for (auto& e : rep.xi_equations)
                os << "replacement-function equation: " << e.str() << " = 0\n";
        }
        if (rep.verdict == Verdict::INCONCLUSIVE && !rep.reason.empty())
            os << "reason: " << rep.reason << "\n";
    } else if (!r.skip_reason.empty()) {
        os << "conjecture analysis skipped: " << r.skip_reason << "\n";
    }
    return os.str();
}

} // namespace dirac
