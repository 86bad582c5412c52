#include "dirac/parser.hpp"

#include <cctype>
#include <sstream>

#include "dirac/error.hpp"

namespace dirac {

namespace {

struct Tok {
    enum Kind { Int, Ident, Str, Op, End } kind;
    std::string text;
    int line, col;
};

std::vector<Tok> lex_line(const std::string& s, int line) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        int col = static_cast<int>(i) + 1;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Int, s.substr(i, j - i), line, col});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), line, col});
            i = j;
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '"') ++j;
            if (j == s.size()) throw SyntaxError("unterminated string", line, col);
            out.push_back({Tok::Str, s.substr(i + 1, j - i - 1), line, col});
            i = j + 1;
        } else if (std::string("+-*/^()[],=~").find(c) != std::string::npos) {
            out.push_back({Tok::Op, std::string(1, c), line, col});
            ++i;
        } else {
            throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
        }
    }
    out.push_back({Tok::End, "", line, static_cast<int>(s.size()) + 1});
    return out;
}

// Either a scalar expression or a Minkowski vector of component expressions.
struct Value {
    bool is_vec = false;
    Expr s;
    std::vector<Expr> v;

    Expr scalar(const Tok& at) const {
        if (is_vec)
            throw ArityMismatch("vector value used where a scalar is required (line " +
                                std::to_string(at.line) + ")");
        return s;
    }
};

bool ident_matches(const std::string& name, char prefix, std::string& digits) {
    if (name.size() < 2 || name[0] != prefix) return false;
    for (std::size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    digits = name.substr(1);
    return true;
}

class ExprParser {
  public:
    ExprParser(const Model& m, std::vector<Tok> toks) : m_(m), toks_(std::move(toks)) {}

    Expr run() {
        Value v = parse_sum();
        expect_end();
        return v.scalar(peek());
    }

    Value parse_sum() {
        Value acc = parse_term();
        while (is_op("+") || is_op("-")) {
            bool plus = peek().text == "+";
            ++pos_;
            Value rhs = parse_term();
            acc = combine(acc, rhs, plus);
        }
        return acc;
    }

    bool at_end() const { return peek().kind == Tok::End; }
    const Tok& peek() const { return toks_[pos_]; }
    void expect_end() {
        if (!at_end())
            throw SyntaxError("unexpected token '" + peek().text + "'", peek().line, peek().col);
    }
    std::size_t pos_ = 0;

  private:
    Value combine(const Value& a, const Value& b, bool plus) {
        if (a.is_vec != b.is_vec)
            throw ArityMismatch("cannot add a scalar and a vector (line " +
                                std::to_string(peek().line) + ")");
        Value r;
        if (a.is_vec) {
            if (a.v.size() != b.v.size())
                throw ArityMismatch("vector dimension mismatch");
            r.is_vec = true;
            for (std::size_t i = 0; i < a.v.size(); ++i)
                r.v.push_back(plus ? a.v[i] + b.v[i] : a.v[i] - b.v[i]);
        } else {
            r.s = plus ? a.s + b.s : a.s - b.s;
        }
        return r;
    }

    Value parse_term() {
        Value acc = parse_factor();
        while (is_op("*") || is_op("/")) {
            bool mul = peek().text == "*";
            Tok at = peek();
            ++pos_;
            Value rhs = parse_factor();
            if (acc.is_vec && rhs.is_vec)
                throw ArityMismatch("use dot() for vector products (line " +
                                    std::to_string(at.line) + ")");
            if (acc.is_vec || rhs.is_vec) {
                const Value& vec = acc.is_vec ? acc : rhs;
                Expr sc = acc.is_vec ? rhs.scalar(at) : acc.scalar(at);
                if (!mul && rhs.is_vec)
                    throw ArityMismatch("cannot divide a scalar by a vector");
                Value r;
                r.is_vec = true;
                for (auto& c : vec.v) r.v.push_back(mul ? c * sc : c / sc);
                acc = r;
            } else {
                acc.s = mul ? acc.s * rhs.s : acc.s / rhs.s;
            }
        }
        return acc;
    }

    Value parse_factor() {
        if (is_op("-")) {
            ++pos_;
            Value v = parse_factor();
            if (v.is_vec)
                for (auto& c : v.v) c = -c;
            else v.s = -v.s;
            return v;
        }
        Value base = parse_primary();
        if (is_op("^")) {
            Tok at = peek();
            ++pos_;
            auto [p, q] = parse_exponent();
            Expr b = base.scalar(at);
            Value r;
            r.s = q == 1 ? b.pow(p) : b.pow(p).root(q);
            return r;
        }
        return base;
    }

    std::pair<long, long> parse_exponent() {
        long sign = 1;
        if (is_op("(")) {
            ++pos_;
            if (is_op("-")) { sign = -1; ++pos_; }
            long p = expect_int();
            long q = 1;
            if (is_op("/")) {
                ++pos_;
                q = expect_int();
            }
            expect_op(")");
            return {sign * p, q};
        }
        if (is_op("-")) { sign = -1; ++pos_; }
        return {sign * expect_int(), 1};
    }

    Value parse_primary() {
        const Tok& t = peek();
        if (t.kind == Tok::Int) {
            ++pos_;
            Value v;
            v.s = Expr::rational(Rat(t.text));
            return v;
        }
        if (is_op("(")) {
            ++pos_;
            Value v = parse_sum();
            expect_op(")");
            return parse_postfix(v, t);
        }
        if (t.kind == Tok::Ident) {
            ++pos_;
            if (t.text == "sqrt" && is_op("(")) {
                ++pos_;
                Value arg = parse_sum();
                expect_op(")");
                Value v;
                v.s = arg.scalar(t).root(2);
                return v;
            }
            if (t.text == "dot" && is_op("(")) {
                ++pos_;
                Value a = parse_sum();
                expect_op(",");
                Value b = parse_sum();
                expect_op(")");
                if (!a.is_vec || !b.is_vec || a.v.size() != b.v.size())
                    throw ArityMismatch("dot() needs two vectors of equal dimension (line " +
                                        std::to_string(t.line) + ")");
                Value v;
                for (std::size_t mu = 0; mu < a.v.size(); ++mu) {
                    Expr term = a.v[mu] * b.v[mu];
                    v.s = mu == 0 ? v.s - term : v.s + term;  // metric (-,+,...,+)
                }
                return v;
            }
            return parse_postfix(resolve(t), t);
        }
        throw SyntaxError("expected an expression, found '" + t.text + "'", t.line, t.col);
    }

    // component selection and tilde marks
    Value parse_postfix(Value v, const Tok& t) {
        while (true) {
            if (is_op("[")) {
                Tok at = peek();
                ++pos_;
                long idx = expect_int();
                expect_op("]");
                if (!v.is_vec)
                    throw ArityMismatch("indexing a non-vector (line " +
                                        std::to_string(at.line) + ")");
                if (idx < 0 || idx >= static_cast<long>(v.v.size()))
                    throw ArityMismatch("component index out of range");
                Value c;
                c.s = v.v[static_cast<std::size_t>(idx)];
                v = c;
            } else if (is_op("~")) {
                ++pos_;
                Expr sc = v.scalar(t);
                std::set<int> vs;
                sc.vars(vs);
                if (vs.size() != 1 || !(sc == Expr::symbol(*vs.begin())))
                    throw SyntaxError("'~' applies to a parameter symbol", t.line, t.col);
                Value c;
                c.s = Expr::symbol(sym_tilde_next(*vs.begin()));
                v = c;
            } else {
                break;
            }
        }
        return v;
    }

    Value resolve(const Tok& t) {
        const std::string& name = t.text;
        if (name == "tau") {
            Value v;
            v.s = Expr::symbol(sym_tau());
            return v;
        }
        // scalar coordinate, velocity, momentum, or constant
        for (int i = 0; i < m_.N; ++i) {
            auto idx = static_cast<std::size_t>(i);
            if (sym_info(m_.coords[idx]).name == name) return scalar_of(m_.coords[idx]);
            if (sym_info(m_.vels[idx]).name == name) return scalar_of(m_.vels[idx]);
            if (sym_info(m_.moms[idx]).name == name) return scalar_of(m_.moms[idx]);
        }
        for (int c : m_.constants)
            if (sym_info(c).name == name) return scalar_of(c);
        // declared vector families (and their velocity/momentum companions)
        if (auto it = m_.vectors.find(name); it != m_.vectors.end())
            return vector_of(it->second, 0);
        if (name.size() > 1) {
            char pre = name[0];
            if (pre == 'u' || pre == 'p') {
                if (auto it = m_.vectors.find(name.substr(1)); it != m_.vectors.end())
                    return vector_of(it->second, pre == 'u' ? 1 : 2);
            }
        }
        // aliases u<digits>/p<digits> for coordinates named q<digits>/x<digits>
        std::string digits;
        if (ident_matches(name, 'u', digits) || ident_matches(name, 'p', digits)) {
            char pre = name[0];
            int which = pre == 'u' ? 1 : 2;
            for (const char* stem : {"q", "x"}) {
                std::string cand = std::string(stem) + digits;
                for (int i = 0; i < m_.N; ++i) {
                    auto idx = static_cast<std::size_t>(i);
                    if (sym_info(m_.coords[idx]).name == cand)
                        return scalar_of(which == 1 ? m_.vels[idx] : m_.moms[idx]);
                }
                if (auto it = m_.vectors.find(cand); it != m_.vectors.end())
                    return vector_of(it->second, which);
            }
        }
        // free functions theta<k>
        if (name.rfind("theta", 0) == 0 && name.size() > 5) {
            bool all = true;
            for (std::size_t i = 5; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) all = false;
            if (all) return scalar_of(sym(name, SymKind::Theta, std::stoi(name.substr(5))));
        }
        // fall back to the global registry for parameter-like symbols, so
        // printed reports reparse
        int id = sym_lookup(name);
        if (id >= 0) {
            SymKind k = sym_info(id).kind;
            if (k == SymKind::Param || k == SymKind::Xi || k == SymKind::XiUnk ||
                k == SymKind::Theta || k == SymKind::VSym || k == SymKind::Const)
                return scalar_of(id);
        }
        throw UndeclaredSymbol(name);
    }

    static Value scalar_of(int id) {
        Value v;
        v.s = Expr::symbol(id);
        return v;
    }

    Value vector_of(const std::vector<int>& comps, int which) {
        Value v;
        v.is_vec = true;
        for (int c : comps) {
            int pos = m_.coord_pos(c);
            auto idx = static_cast<std::size_t>(pos);
            int id = which == 0 ? c : (which == 1 ? m_.vels[idx] : m_.moms[idx]);
            v.v.push_back(Expr::symbol(id));
        }
        return v;
    }

    bool is_op(const char* o) const {
        return peek().kind == Tok::Op && peek().text == o;
    }
    void expect_op(const char* o) {
        if (!is_op(o))
            throw SyntaxError(std::string("expected '") + o + "'", peek().line, peek().col);
        ++pos_;
    }
    long expect_int() {
        if (peek().kind != Tok::Int)
            throw SyntaxError("expected an integer", peek().line, peek().col);
        long v = std::stol(peek().text);
        ++pos_;
        return v;
    }

    const Model& m_;
    std::vector<Tok> toks_;
};

void declare_coord(Model& m, const std::string& name) {
    int pos = m.N + 1;
    int c = sym(name, SymKind::Coord, pos);
    int u = sym("u" + name, SymKind::Vel, pos);
    int p = sym("p" + name, SymKind::Mom, pos);
    m.coords.push_back(c);
    m.vels.push_back(u);
    m.moms.push_back(p);
    ++m.N;
}

} // namespace

Expr parse_expr(const std::string& text, const Model& scope) {
    ExprParser p(scope, lex_line(text, 1));
    return p.run();
}

Model parse_model(const std::string& text) {
    Model m;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_lagrangian = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = lex_line(line, lineno);
        if (toks.front().kind == Tok::End) continue;
        const Tok& head = toks.front();
        if (head.kind != Tok::Ident)
            throw SyntaxError("expected a directive", lineno, head.col);
        auto rest = std::vector<Tok>(toks.begin() + 1, toks.end());
        const std::string& dir = head.text;
        if (dir == "model") {
            if (rest.front().kind != Tok::Str)
                throw SyntaxError("model expects a quoted name", lineno, rest.front().col);
            m.name = rest.front().text;
        } else if (dir == "dim") {
            if (rest.front().kind != Tok::Int)
                throw SyntaxError("dim expects an integer", lineno, rest.front().col);
            if (!m.vectors.empty())
                throw SyntaxError("dim must precede vector declarations", lineno, head.col);
            m.dim = std::stoi(rest.front().text);
        } else if (dir == "coords") {
            for (auto& t : rest) {
                if (t.kind == Tok::End) break;
                if (t.kind != Tok::Ident)
                    throw SyntaxError("coords expects identifiers", lineno, t.col);
                declare_coord(m, t.text);
            }
        } else if (dir == "vector") {
            for (auto& t : rest) {
                if (t.kind == Tok::End) break;
                if (t.kind != Tok::Ident)
                    throw SyntaxError("vector expects identifiers", lineno, t.col);
                std::vector<int> comps;
                for (int mu = 0; mu < m.dim; ++mu) {
                    std::string cname = t.text + "[" + std::to_string(mu) + "]";
                    declare_coord(m, cname);
                    comps.push_back(m.coords.back());
                }
                m.vectors[t.text] = comps;
            }
        } else if (dir == "const") {
            if (rest.front().kind != Tok::Ident)
                throw SyntaxError("const expects an identifier", lineno, rest.front().col);
            int id = sym(rest.front().text, SymKind::Const,
                         static_cast<int>(m.constants.size()) + 1);
            m.constants.push_back(id);
            for (std::size_t i = 1; i < rest.size(); ++i) {
                if (rest[i].kind == Tok::End) break;
                if (rest[i].text == "nonzero") sym_assume(id, true, false);
                else if (rest[i].text == "positive") sym_assume(id, false, true);
                else throw SyntaxError("unknown assumption '" + rest[i].text + "'", lineno, rest[i].col);
            }
        } else if (dir == "lagrangian") {
            if (rest.front().kind == Tok::End)
                throw SyntaxError("empty lagrangian", lineno, head.col);
            ExprParser p(m, rest);
            m.lagrangian = p.run();
            have_lagrangian = true;
        } else if (dir == "usolution") {
            std::vector<Expr> sol(static_cast<std::size_t>(m.N));
            std::vector<bool> seen(static_cast<std::size_t>(m.N), false);
            std::size_t i = 0;
            while (i < rest.size() && rest[i].kind != Tok::End) {
                if (rest[i].kind != Tok::Ident)
                    throw SyntaxError("usolution expects 'uN = expr' entries", lineno, rest[i].col);
                std::string uname = rest[i].text;
                int pos = -1;
                for (int a = 0; a < m.N; ++a) {
                    auto idx = static_cast<std::size_t>(a);
                    const std::string& vn = sym_info(m.vels[idx]).name;
                    if (vn == uname) pos = a;
                    std::string digits;
                    if (pos < 0 && ident_matches(uname, 'u', digits)) {
                        if (sym_info(m.coords[idx]).name == "q" + digits ||
                            sym_info(m.coords[idx]).name == "x" + digits)
                            pos = a;
                    }
                }
                if (pos < 0) throw UndeclaredSymbol(uname);
                ++i;
                if (i >= rest.size() || rest[i].text != "=")
                    throw SyntaxError("expected '=' in usolution", lineno, rest[i - 1].col);
                ++i;
                // slice until ',' or end
                std::vector<Tok> sub;
                int depth = 0;
                while (i < rest.size() && rest[i].kind != Tok::End) {
                    if (rest[i].text == "(" || rest[i].text == "[") ++depth;
                    if (rest[i].text == ")" || rest[i].text == "]") --depth;
                    if (depth == 0 && rest[i].text == ",") break;
                    sub.push_back(rest[i]);
                    ++i;
                }
                sub.push_back({Tok::End, "", lineno, 0});
                ExprParser p(m, sub);
                sol[static_cast<std::size_t>(pos)] = p.run();
                seen[static_cast<std::size_t>(pos)] = true;
                if (i < rest.size() && rest[i].text == ",") ++i;
            }
            for (int a = 0; a < m.N; ++a)
                if (!seen[static_cast<std::size_t>(a)])
                    throw ArityMismatch("usolution must cover all " + std::to_string(m.N) +
                                        " velocities");
            m.provided_usolution = std::move(sol);
        } else if (dir == "assume") {
            if (rest.size() < 3 || rest[0].kind != Tok::Ident || rest[1].kind != Tok::Ident)
                throw SyntaxError("assume expects: assume <symbol> nonzero|positive", lineno, head.col);
            int id = sym_lookup(rest[0].text);
            if (id < 0) throw UndeclaredSymbol(rest[0].text);
            if (rest[1].text == "nonzero") sym_assume(id, true, false);
            else if (rest[1].text == "positive") sym_assume(id, false, true);
            else throw SyntaxError("unknown assumption '" + rest[1].text + "'", lineno, rest[1].col);
        } else if (dir == "max_order") {
            if (rest.front().kind != Tok::Int)
                throw SyntaxError("max_order expects an integer", lineno, rest.front().col);
            m.max_chain_order = std::stoi(rest.front().text);
            if (m.max_chain_order < 1)
                throw SyntaxError("max_order must be >= 1", lineno, rest.front().col);
        } else if (dir == "degree_cap") {
            if (rest.front().kind != Tok::Int)
                throw SyntaxError("degree_cap expects an integer", lineno, rest.front().col);
            m.degree_cap = std::stoi(rest.front().text);
            if (m.degree_cap < 1)
                throw SyntaxError("degree_cap must be >= 1", lineno, rest.front().col);
        } else if (dir == "dtr_weight") {
            if (rest.size() < 2 || rest[0].kind != Tok::Int)
                throw SyntaxError("dtr_weight expects: dtr_weight <k> <expr>", lineno, head.col);
            int k = std::stoi(rest[0].text);
            std::vector<Tok> sub(rest.begin() + 1, rest.end());
            ExprParser p(m, sub);
            m.dtr_weights[k] = p.run();
        } else {
            throw SyntaxError("unknown directive '" + dir + "'", lineno, head.col);
        }
    }
    if (!have_lagrangian) throw SyntaxError("missing lagrangian", lineno + 1, 1);
    // validate the lagrangian's symbol content
    std::set<int> vs;
    m.lagrangian.vars(vs);
    for (int v : vs) {
        SymKind k = sym_info(v).kind;
        if (k == SymKind::Mom)
            throw SyntaxError("lagrangian must not contain momenta (" + sym_info(v).name + ")", 1, 1);
        if (k == SymKind::Tau)
            throw SyntaxError("lagrangian must not contain tau explicitly", 1, 1);
    }
    // a usolution radical implies positivity of its base (needed for the
    // solution to be real), record it as an assumption
    if (m.provided_usolution) {
        std::set<int> uvars;
        for (auto& e : *m.provided_usolution) e.vars(uvars);
        for (int v : uvars)
            if (sym_info(v).kind == SymKind::Radical)
                sym_assume(sym_info(v).radical_base, false, true);
    }
    return m;
}

} // namespace dirac
