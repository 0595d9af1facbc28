#pragma once

#include <stdexcept>
#include <string>

namespace tdompc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input contains NaN or infinity.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

class SymmetryError : public Error {
public:
    using Error::Error;
};

class NotSpdError : public Error {
public:
    using Error::Error;
};

/// A fixed-point iteration hit its cap before meeting its stopping rule.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

class NotSchurError : public Error {
public:
    using Error::Error;
};

/// The plant/cost pair cannot be condensed (DARE failed, so (A, B) is likely not stabilizable).
class StabilizabilityError : public Error {
public:
    using Error::Error;
};

class ConditioningError : public Error {
public:
    using Error::Error;
};

/// Problem data violates a modelling assumption (box must contain the origin, P must solve the DARE, ...).
class InvalidProblemError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class OracleFailure : public Error {
public:
    using Error::Error;
};

class CertificationAssumptionError : public Error {
public:
    using Error::Error;
};

/// The accelerated method is not yet a contraction at the requested iteration count.
class NotContractiveError : public Error {
public:
    using Error::Error;
};

}  // namespace tdompc
