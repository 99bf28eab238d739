#pragma once

#include <stdexcept>
#include <string>

namespace fqn {

// Bad argument values (out of range coordinates, fillings, parameters).
struct InputDomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Valid arguments that this library does not handle (odd L momentum grids, non power of two BK, ...).
struct UnsupportedConfiguration : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

// A computed object failed a physical/numerical invariant (unphysical Gamma, non-orthogonal layer).
struct NumericalInvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
template <class E>
inline void require(bool ok, const std::string& msg) {
    if (!ok) throw E(msg);
}
}  // namespace detail

}  // namespace fqn
