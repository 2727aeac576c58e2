#pragma once

#include <stdexcept>
#include <string>

namespace specind {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : Error { using Error::Error; };
struct SelfLoop : Error { using Error::Error; };
struct DuplicateEdge : Error { using Error::Error; };
struct DisconnectedGraph : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct OutOfConvergenceRadius : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct EmptySupport : Error { using Error::Error; };
struct InfeasibleBoundary : Error { using Error::Error; };
struct FixedPointNotBracketed : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

} // namespace specind
