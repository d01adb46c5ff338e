#pragma once

#include <stdexcept>
#include <string>

namespace rptf {

/// Input shapes disagree (vector length vs polynomial dimension, ragged data).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented preconditions.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed model / data / gadget files.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rptf
