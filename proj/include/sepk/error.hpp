#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sepk {

enum class ErrorKind {
    Parse,
    DanglingEndpoint,
    DuplicateId,
    Range,
    Precondition,
    NotBipartite,
    BudgetExceeded,
    NotInKernel,
    MalformedExpression,
    Unsupported,
    Invalid,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::DanglingEndpoint: return "dangling reference";
    case ErrorKind::DuplicateId: return "duplicate id";
    case ErrorKind::Range: return "parameter out of range";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::NotBipartite: return "graph is not bipartite";
    case ErrorKind::BudgetExceeded: return "budget exceeded";
    case ErrorKind::NotInKernel: return "element not in kernel";
    case ErrorKind::MalformedExpression: return "malformed expression";
    case ErrorKind::Unsupported: return "unsupported operation";
    case ErrorKind::Invalid: return "invalid argument";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised by the canonical sequence builder; carries the index of the last
// layer that was fully built before the vertex budget ran out.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, int last_completed_layer)
        : Error(ErrorKind::BudgetExceeded, what), last_completed_layer_(last_completed_layer) {}

    int last_completed_layer() const noexcept { return last_completed_layer_; }

private:
    int last_completed_layer_;
};

} // namespace sepk
