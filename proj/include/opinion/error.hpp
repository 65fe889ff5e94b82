// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <stdexcept>
#include <string>

namespace opinion {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or missing input file, or a file that violates its format.
class LoadError : public Error {
public:
    using Error::Error;
};

/// Caller passed an out-of-range argument. `field()` names the offending parameter.
class ParameterError : public Error {
public:
    ParameterError(std::string field, const std::string& message)
        : Error(message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite value.
class DivergenceError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

}  // namespace opinion
