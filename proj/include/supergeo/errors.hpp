#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace supergeo {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live over different variable tables.
class table_mismatch : public error {
public:
    using error::error;
};

/// An element whose body is not a single nonzero Laurent term was asked to be inverted.
class not_a_unit : public error {
public:
    using error::error;
};

/// Wrong parity for an operation (odd image for an even variable, odd entry in an even grid, ...).
class parity_error : public error {
public:
    using error::error;
};

class unknown_variable : public error {
public:
    using error::error;
};

/// Dimension or grading mismatch between matrices.
class dimension_error : public error {
public:
    using error::error;
};

/// A geometric precondition failed: leaving an overlap's localization, a non-monomial body map,
/// a lift that does not reduce to the declared cocycle, a rejected matrix cocycle, ...
class domain_error : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t position)
        : error(what + " at position " + std::to_string(position)), position_(position)
    {
    }

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace supergeo
