#pragma once

#include <stdexcept>
#include <string>

namespace susyqm {

/// Base of every error raised by the library. `kind()` is a stable tag used in
/// the CLI's structured error output.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error("dimension_mismatch", what) {}
};

struct ParityError : Error {
    explicit ParityError(const std::string& what) : Error("parity", what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

struct DegenerateObservableError : Error {
    explicit DegenerateObservableError(const std::string& what)
        : Error("degenerate_observable", what) {}
};

/// Inverse iteration did not reach the requested residual.
struct NotConvergedError : Error {
    NotConvergedError(const std::string& what, double residual)
        : Error("not_converged", what), residual(residual) {}
    double residual;
};

/// The supplied ground state changes sign inside the trusted region.
struct NodeError : Error {
    NodeError(const std::string& what, std::size_t index)
        : Error("interior_node", what), index(index) {}
    std::size_t index;
};

struct InputError : Error {
    explicit InputError(const std::string& what) : Error("input", what) {}
};

}  // namespace susyqm
