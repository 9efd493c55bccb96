#pragma once

#include <stdexcept>
#include <string>

namespace upqc {

// Base for all library errors. Subclasses mirror the failure modes of the
// public operations so callers can catch narrowly.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Index outside a sampled prefix, or k < 1.
class OutOfRange : public Error {
public:
    using Error::Error;
};

// Ill-typed or ill-formed sequence/function specification.
class MalformedSpec : public Error {
public:
    using Error::Error;
};

// Invalid parameter value (nonpositive step, empty grid, ...).
class BadParams : public Error {
public:
    using Error::Error;
};

// exact_period_density on a spec with no declared period.
class NotPeriodic : public Error {
public:
    using Error::Error;
};

// make_builtin with a name outside the catalog.
class UnknownWitness : public Error {
public:
    using Error::Error;
};

// Classification grid too short for the requested step.
class InsufficientData : public Error {
public:
    using Error::Error;
};

// Operation needs metadata (Lipschitz constant, bound) the function lacks.
class MissingMetadata : public Error {
public:
    using Error::Error;
};

// perturb_function on a function without a finite bound.
class UnboundedFunction : public Error {
public:
    using Error::Error;
};

// Arc prediction with sin(alpha*p/2) = 0.
class DegenerateFrequency : public Error {
public:
    using Error::Error;
};

// Reparametrization by a map whose sampled values decrease.
class NotMonotone : public Error {
public:
    using Error::Error;
};

// Bernstein evaluation outside [0,1] or degree < 1.
class DomainError : public Error {
public:
    using Error::Error;
};

// suc_evidence with a witness that is itself Violated.
class SuiteInvalid : public Error {
public:
    using Error::Error;
};

// An internal dual-route consistency check failed (analytic vs direct path).
class CrossCheckError : public Error {
public:
    using Error::Error;
};

// File/stream I/O failure.
class FileError : public Error {
public:
    using Error::Error;
};

}  // namespace upqc
