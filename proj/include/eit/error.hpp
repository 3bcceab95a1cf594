#pragma once

#include <stdexcept>
#include <string>

namespace eit {

// Base for every error raised by the library. Callers that only need to
// distinguish "bad input" from "numerical failure" can catch the subclasses.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ChecksumError : public FormatError {
public:
    using FormatError::FormatError;
};

}  // namespace eit
