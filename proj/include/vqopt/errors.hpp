#pragma once

#include <stdexcept>
#include <string>

namespace vqopt {

/// Malformed user input: bad indices, dimension mismatches, invalid configs.
struct InvalidInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The requested operation does not apply to this circuit shape
/// (e.g. Fourier-quadrature gradient on a circuit with pinned parameters).
struct UnsupportedShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A configurable resource cap would be exceeded (e.g. tomography grid size).
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation called on an object in a state that cannot support it.
struct InvalidStateError : std::logic_error {
    using std::logic_error::logic_error;
};

/// A numerical invariant the implementation relies on was violated.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace vqopt
