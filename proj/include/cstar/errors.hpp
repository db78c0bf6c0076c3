#pragma once

#include <stdexcept>
#include <string>

namespace cstar {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Two operands live over different algebras (or incompatible shapes).
class DescriptorMismatch : public Error {
public:
    explicit DescriptorMismatch(const std::string& what) : Error(what) {}
};

// Construction-time validation failure (bad dimensions, bad group table, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// A numerical routine failed (singular solve, eigendecomposition, divergence).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

// File / parsing problems. Carries a line number when one is known.
class IoError : public Error {
public:
    explicit IoError(const std::string& what, long line = -1)
        : Error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

}  // namespace cstar
