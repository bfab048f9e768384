#ifndef CAUSALGAP_ERRORS_HPP
#define CAUSALGAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace causalgap {

// Base class for all errors raised by this library. Subclasses carry the
// failure category; the what() string names the offending entity.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- graph errors ----
class DuplicateNodeError : public Error {
public:
    using Error::Error;
};
class UnknownEndpointError : public Error {
public:
    using Error::Error;
};
class CycleDetectedError : public Error {
public:
    using Error::Error;
};
class UnknownNodeError : public Error {
public:
    using Error::Error;
};
class InvalidPathError : public Error {
public:
    using Error::Error;
};
class OverlappingSetsError : public Error {
public:
    using Error::Error;
};

// ---- table errors ----
class UnknownVariableError : public Error {
public:
    using Error::Error;
};
class ZeroProbabilityEventError : public Error {
public:
    using Error::Error;
};
class VariableMismatchError : public Error {
public:
    using Error::Error;
};
class MissingCpdError : public Error {
public:
    using Error::Error;
};
class UnnormalizedCpdError : public Error {
public:
    using Error::Error;
};

// ---- quantum model errors ----
class ModelInvalidError : public Error {
public:
    using Error::Error;
};
class IncompleteAssignmentError : public Error {
public:
    using Error::Error;
};
class SnapFailureError : public Error {
public:
    using Error::Error;
};

// ---- Bell / LP errors ----
class NonBinaryVariableError : public Error {
public:
    using Error::Error;
};
class ZeroSettingProbabilityError : public Error {
public:
    using Error::Error;
};
class MalformedDataError : public Error {
public:
    using Error::Error;
};

// ---- scenario errors ----
class PreconditionViolatedError : public Error {
public:
    using Error::Error;
};
class PipelineStepFailedError : public Error {
public:
    PipelineStepFailedError(const std::string& step, const std::string& what)
        : Error("step '" + step + "': " + what), step_(step) {}
    const std::string& step() const { return step_; }

private:
    std::string step_;
};

// ---- serialization errors ----
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace causalgap

#endif
