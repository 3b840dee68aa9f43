#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace symhyp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Raised when a coefficient field produces a non-finite or otherwise
/// unusable value at a specific node.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, int i, int n)
        : Error(what + " at node (i=" + std::to_string(i) + ", n=" + std::to_string(n) + ")"),
          i_(i), n_(n) {}

    int i() const noexcept { return i_; }
    int n() const noexcept { return n_; }

private:
    int i_;
    int n_;
};

}  // namespace symhyp
