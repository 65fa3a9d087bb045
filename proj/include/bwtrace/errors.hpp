#ifndef BWTRACE_ERRORS_HPP
#define BWTRACE_ERRORS_HPP

#include <stdexcept>

namespace bwtrace {

/// A stream could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A generator spec or run configuration violates its invariants.
class InvalidSpec : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace bwtrace

#endif  // BWTRACE_ERRORS_HPP
