#pragma once

#include <stdexcept>
#include <string>

namespace willmore {

enum class ErrorKind {
    rank,
    causality,
    validation,
    plane_not_sphere,
    degenerate_immersion,
    pole_on_surface,
    diffeomorphism_failure,
    umbilic_circle,
    not_spacelike,
    search_failure,
    precondition,
    infeasible,
    size,
    degenerate_fit,
    domain,
    config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised by the subdivision when J pieces cannot be formed.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& message, int max_feasible)
        : Error(ErrorKind::infeasible, message), max_feasible_(max_feasible) {}

    int max_feasible() const noexcept { return max_feasible_; }

private:
    int max_feasible_;
};

}  // namespace willmore
