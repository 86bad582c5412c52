#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

// Base class for all engine errors. Subclasses carry no extra state beyond
// the message unless noted; catch sites dispatch on type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& w = "division by zero") : Error(w) {}
};

struct Inconclusive : Error {
    explicit Inconclusive(const std::string& w) : Error(w) {}
};

struct DegreeCapExceeded : Error {
    explicit DegreeCapExceeded(const std::string& w) : Error(w) {}
};

struct SyntaxError : Error {
    int line, col;
    SyntaxError(const std::string& w, int line_, int col_)
        : Error(w + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
          line(line_), col(col_) {}
};

struct UndeclaredSymbol : Error {
    explicit UndeclaredSymbol(const std::string& name) : Error("undeclared symbol: " + name) {}
};

struct ArityMismatch : Error {
    explicit ArityMismatch(const std::string& w) : Error(w) {}
};

struct PivotUndecidable : Error {
    explicit PivotUndecidable(const std::string& w) : Error(w) {}
};

struct ChainNotTerminated : Error {
    explicit ChainNotTerminated(const std::string& w) : Error(w) {}
};

struct NonlinearNoUserSolution : Error {
    explicit NonlinearNoUserSolution(const std::string& w) : Error(w) {}
};

struct UserSolutionInvalid : Error {
    int index;
    UserSolutionInvalid(const std::string& w, int index_) : Error(w), index(index_) {}
};

struct XNotInvertible : Error {
    explicit XNotInvertible(const std::string& w) : Error(w) {}
};

struct AssociatedFunctionMissing : Error {
    explicit AssociatedFunctionMissing(const std::string& w) : Error(w) {}
};

struct VerificationFailed : Error {
    explicit VerificationFailed(const std::string& w) : Error(w) {}
};

struct SecondClassPresent : Error {
    explicit SecondClassPresent(const std::string& w) : Error(w) {}
};

struct DecompositionFailed : Error {
    explicit DecompositionFailed(const std::string& w) : Error(w) {}
};

} // namespace dirac
