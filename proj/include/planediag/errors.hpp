#pragma once

#include <stdexcept>
#include <string>

namespace planediag {

// A well-formed input that fails mathematically: not an automorphism, not
// diagonalizable, a precondition of an algorithm that the input violates.
class MathError : public std::runtime_error {
public:
    explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed text input (polynomial grammar, instance files, certificates).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Violated internal invariant. Raised when an input is outside the scope
// the algorithms are proven for, or when the library has a bug.
class AssertionFailure : public std::logic_error {
public:
    explicit AssertionFailure(const std::string& what) : std::logic_error(what) {}
};

inline void ensure(bool cond, const std::string& msg) {
    if (!cond) throw AssertionFailure(msg);
}

}  // namespace planediag
