#pragma once

#include <vector>

#include "dirac/expr.hpp"

namespace dirac {

using Matrix = std::vector<std::vector<Expr>>;

Matrix identity_matrix(int n);
Matrix mat_mul(const Matrix& a, const Matrix& b);

struct SweepResult {
    int R = 0;                     // rank over the rational-function field
    Matrix Qmat;                   // row-operation witness, regular
    std::vector<int> C_perm;       // permuted column j holds original column C_perm[j]
    std::vector<std::vector<Expr>> z;  // null row vectors (rows R.. of Qmat)
    Matrix reduced;                // Qmat * M * C_perm, block [[I, Nblock],[0,0]]
};

// Symbolic Gaussian elimination with full pivoting. Pivot preference:
// nonzero rational constants, then entries provably nonzero under the
// assumptions, then any nonzero entry of lowest total degree.
SweepResult sweep_out(const Matrix& M);

// Inverse of a square matrix over the rational-function field.
// Throws XNotInvertible when singular.
Matrix mat_inverse(const Matrix& a);

} // namespace dirac
