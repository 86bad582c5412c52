#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dirac/expr.hpp"

namespace dirac {

// A parsed model: Lagrangian plus its declared symbol inventory. Coordinates,
// velocities, and momenta are index-aligned; vector declarations are expanded
// into scalar components at parse time.
struct Model {
    std::string name;
    int N = 0;
    std::vector<int> coords;  // q^A symbol ids in declaration order
    std::vector<int> vels;    // u^A, paired with coords
    std::vector<int> moms;    // pi_A, paired with coords
    Expr lagrangian;
    std::vector<int> constants;
    std::optional<std::vector<Expr>> provided_usolution;  // over (q, pi, theta)
    int max_chain_order = 6;
    int degree_cap = 12;
    int dim = 4;
    // Minkowski-vector families declared via `vector`: name -> component ids
    std::map<std::string, std::vector<int>> vectors;
    // optional per-secondary-constraint weights for the DTR generator,
    // keyed by 1-based discovery index
    std::map<int, Expr> dtr_weights;

    int coord_pos(int symbol) const {  // -1 when not a coordinate
        for (int i = 0; i < N; ++i)
            if (coords[static_cast<std::size_t>(i)] == symbol) return i;
        return -1;
    }
};

} // namespace dirac
