#pragma once

#include <stdexcept>
#include <string>

namespace cslmeson
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration input (JSON, CSV, presets).
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// An argument outside the documented domain of an operation.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// A numerical procedure failed to meet its tolerance or did not converge.
class NumericError : public Error
{
public:
    using Error::Error;
};

} // namespace cslmeson
