#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cubefix {

enum class ErrorKind {
    NotConnected,
    NotMedian,
    NotSimple,
    UnknownEdge,
    UnknownVertex,
    OutOfWindow,
    PreconditionViolated,
    NoCaseApplies,
    Stalled,
    MissingTree,
    DuplicateRootLabel,
    LabelNotReduced,
    NoMovingGenerator,
    OutOfRange,
    InsufficientData,
    NotReduced,
    PoolTooSmall,
    LengthTooShort,
    Format,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    // Vertex indices or other integers attached to the failure (e.g. a median witness triple).
    std::vector<int> witness;

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace cubefix
