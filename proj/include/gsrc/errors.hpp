// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace gsrc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// galois
struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero field element") {}
};
struct SingularMatrix : Error {
    using Error::Error;
    SingularMatrix() : Error("matrix is singular") {}
};

// layout
struct NoValidPartition : Error {
    using Error::Error;
};
struct PreconditionViolated : Error {
    using Error::Error;
};

// codec
struct MdsSearchExhausted : Error {
    using Error::Error;
};
struct SingularSystem : Error {
    using Error::Error;
};
struct WrongNodeCount : Error {
    using Error::Error;
};

// repair
struct UnsolvableSchedule : Error {
    using Error::Error;
};
struct BoundViolation : Error {
    using Error::Error;
};
struct MissingSymbol : Error {
    using Error::Error;
};

// cli / io
struct IoError : Error {
    using Error::Error;
};
struct UsageError : Error {
    using Error::Error;
};

}  // namespace gsrc
