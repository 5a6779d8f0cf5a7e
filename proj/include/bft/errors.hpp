#pragma once

#include <stdexcept>
#include <string>

namespace bft {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class OutOfRange : public Error {
public:
    explicit OutOfRange(const std::string& msg) : Error(msg) {}
};

// A long-exact-sequence computation touched a stem group outside the table
// that is not forced to vanish.
class StemRangeExceeded : public OutOfRange {
public:
    explicit StemRangeExceeded(const std::string& msg) : OutOfRange(msg) {}
};

class Unsupported : public Error {
public:
    explicit Unsupported(const std::string& msg) : Error(msg) {}
};

class PreconditionViolation : public Error {
public:
    explicit PreconditionViolation(const std::string& msg) : Error(msg) {}
};

class NotCharacteristic : public PreconditionViolation {
public:
    explicit NotCharacteristic(const std::string& msg) : PreconditionViolation(msg) {}
};

class NonIntegerDimension : public Error {
public:
    explicit NonIntegerDimension(const std::string& msg) : Error(msg) {}
};

class IncompatibleBoundary : public Error {
public:
    explicit IncompatibleBoundary(const std::string& msg) : Error(msg) {}
};

class BadEmbedding : public Error {
public:
    explicit BadEmbedding(const std::string& msg) : Error(msg) {}
};

class NoLift : public Error {
public:
    explicit NoLift(const std::string& msg) : Error(msg) {}
};

class NonUnique : public Error {
public:
    explicit NonUnique(const std::string& msg) : Error(msg) {}
};

class Inconsistent : public Error {
public:
    explicit Inconsistent(const std::string& msg) : Error(msg) {}
};

}  // namespace bft
