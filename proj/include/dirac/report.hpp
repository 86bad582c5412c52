#pragma once

#include <optional>
#include <string>

#include "dirac/brackets.hpp"
#include "dirac/canonical.hpp"
#include "dirac/conjecture.hpp"
#include "dirac/lagrangian.hpp"
#include "dirac/model.hpp"

namespace dirac {

// Everything one analysis run produced. Optional pieces are absent when the
// requested stage stopped earlier or the model structure rules them out.
struct RunReport {
    std::string model;
    Model m;
    std::optional<LagAnalysis> la;
    std::optional<CanAnalysis> can;
    bool with_brackets = false;  // include the pairwise bracket tables
    std::optional<bool> class_ia;
    std::optional<ConjectureReport> conjecture;
    std::string skip_reason;  // conjecture absent: why (second class, ...)
};

// Stable machine-readable serialization: fixed key order, canonical
// expression printing, byte-identical across runs on the same input.
std::string emit_json(const RunReport& r);

// Human-readable rendering of the same content.
std::string render_text(const RunReport& r);

} // namespace dirac
