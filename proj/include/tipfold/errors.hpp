#pragma once

#include <stdexcept>
#include <string>

namespace tipfold {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A SystemConfig (or other input) violates one of its invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The event-driven simulator hit its event cap. Usually means the trajectory
/// is oscillating across x = 0 close to a cyclic fold.
class MaxEventsExceeded : public Error {
public:
    using Error::Error;
};

class NoTipWithinBudget : public Error {
public:
    using Error::Error;
};

class NewtonDiverged : public Error {
public:
    using Error::Error;
};

/// A converged periodic orbit fails the sign conditions x+ > 0, x- < 0.
class Unphysical : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class StepFloorReached : public Error {
public:
    using Error::Error;
};

class ContinuationDiverged : public Error {
public:
    using Error::Error;
};

} // namespace tipfold
