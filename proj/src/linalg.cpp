#include "dirac/linalg.hpp"

#include "dirac/error.hpp"

namespace dirac {

Matrix identity_matrix(int n) {
    Matrix m(static_cast<std::size_t>(n),
             std::vector<Expr>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Expr::integer(1);
    return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    std::size_t n = a.size(), k = b.size(), p = b.empty() ? 0 : b[0].size();
    Matrix r(n, std::vector<Expr>(p));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            Expr acc;
            for (std::size_t t = 0; t < k; ++t) acc = acc + a[i][t] * b[t][j];
            r[i][j] = acc;
        }
    return r;
}

namespace {

// Lower score = better pivot.
int pivot_score(const Expr& e) {
    if (e.is_rational()) return 0;
    if (e.provably_nonzero()) return 1;
    return 2;
}

int expr_degree(const Expr& e) { return e.num().deg() + e.den().deg(); }

} // namespace

SweepResult sweep_out(const Matrix& M) {
    int n = static_cast<int>(M.size());
    SweepResult res;
    Matrix work = M;
    res.Qmat = identity_matrix(n);
    res.C_perm.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) res.C_perm[static_cast<std::size_t>(j)] = j;

    int r = 0;
    while (r < n) {
        int bi = -1, bj = -1, bscore = 99, bdeg = 0;
        for (int i = r; i < n; ++i)
            for (int j = r; j < n; ++j) {
                const Expr& e = work[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                bool zero;
                try {
                    zero = e.is_zero();
                } catch (const Inconclusive& ex) {
                    throw PivotUndecidable(std::string("pivot candidate undecidable: ") + ex.what());
                }
                if (zero) continue;
                int sc = pivot_score(e), dg = expr_degree(e);
                if (sc < bscore || (sc == bscore && dg < bdeg)) {
                    bscore = sc;
                    bdeg = dg;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        auto R = [&](int i) { return static_cast<std::size_t>(i); };
        if (bi != r) {
            std::swap(work[R(bi)], work[R(r)]);
            std::swap(res.Qmat[R(bi)], res.Qmat[R(r)]);
        }
        if (bj != r) {
            for (int i = 0; i < n; ++i)
                std::swap(work[R(i)][R(bj)], work[R(i)][R(r)]);
            std::swap(res.C_perm[R(bj)], res.C_perm[R(r)]);
        }
        Expr p = work[R(r)][R(r)];
        for (int j = 0; j < n; ++j) work[R(r)][R(j)] = work[R(r)][R(j)] / p;
        for (int j = 0; j < n; ++j) res.Qmat[R(r)][R(j)] = res.Qmat[R(r)][R(j)] / p;
        for (int i = 0; i < n; ++i) {
            if (i == r) continue;
            Expr f = work[R(i)][R(r)];
            if (f.is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                work[R(i)][R(j)] = work[R(i)][R(j)] - f * work[R(r)][R(j)];
                res.Qmat[R(i)][R(j)] = res.Qmat[R(i)][R(j)] - f * res.Qmat[R(r)][R(j)];
            }
        }
        ++r;
    }
    res.R = r;
    res.reduced = std::move(work);
    for (int i = r; i < n; ++i)
        res.z.push_back(res.Qmat[static_cast<std::size_t>(i)]);
    return res;
}

Matrix mat_inverse(const Matrix& a) {
    int n = static_cast<int>(a.size());
    Matrix work = a;
    Matrix inv = identity_matrix(n);
    auto R = [](int i) { return static_cast<std::size_t>(i); };
    for (int c = 0; c < n; ++c) {
        int pr = -1;
        for (int i = c; i < n; ++i)
            if (!work[R(i)][R(c)].is_zero()) { pr = i; break; }
        if (pr < 0) throw XNotInvertible("singular matrix");
        if (pr != c) {
            std::swap(work[R(pr)], work[R(c)]);
            std::swap(inv[R(pr)], inv[R(c)]);
        }
        Expr p = work[R(c)][R(c)];
        for (int j = 0; j < n; ++j) {
            work[R(c)][R(j)] = work[R(c)][R(j)] / p;
            inv[R(c)][R(j)] = inv[R(c)][R(j)] / p;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c) continue;
            Expr f = work[R(i)][R(c)];
            if (f.is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                work[R(i)][R(j)] = work[R(i)][R(j)] - f * work[R(c)][R(j)];
                inv[R(i)][R(j)] = inv[R(i)][R(j)] - f * inv[R(c)][R(j)];
            }
        }
    }
    return inv;
}

} // namespace dirac
