#pragma once

#include <stdexcept>
#include <string>

namespace scour {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid optimizer, split, or model configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A record or value violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Input file does not carry the columns or fields required by its schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Malformed structured input (model files, reports, config files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: objective never finite, or data cannot identify a fit.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A formula or model needs an input the record does not provide.
class MissingInputError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

} // namespace scour
