#pragma once

#include <stdexcept>
#include <string>

namespace oscp {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

class MissingShapeMatrix : public Error {
public:
    explicit MissingShapeMatrix(const std::string& msg) : Error(msg) {}
};

class EmptyDataset : public Error {
public:
    explicit EmptyDataset(const std::string& msg) : Error(msg) {}
};

class TooFewSeries : public Error {
public:
    explicit TooFewSeries(const std::string& msg) : Error(msg) {}
};

/// Thrown when ceil((1-epsilon)(n+1)) > n, i.e. the requested error level is
/// unattainable with n samples. Carries the smallest n that would suffice.
class InsufficientData : public Error {
public:
    InsufficientData(const std::string& msg, long long required_n_, long long n_, double epsilon_)
        : Error(msg), required_n(required_n_), n(n_), epsilon(epsilon_) {}
    long long required_n;
    long long n;
    double epsilon;
};

class EnumerationCapExceeded : public Error {
public:
    explicit EnumerationCapExceeded(const std::string& msg) : Error(msg) {}
};

class EmptyTestSet : public Error {
public:
    explicit EmptyTestSet(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

class NonFiniteValue : public Error {
public:
    explicit NonFiniteValue(const std::string& msg) : Error(msg) {}
};

/// Precondition violations on plain arguments (bad epsilon range, bad ratio, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

} // namespace oscp
