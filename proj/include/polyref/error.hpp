// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace polyref {

//! Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! Malformed input text: JSON syntax or schema violation.
class ParseError : public Error {
public:
    using Error::Error;
};

//! A domain object violates one of its invariants (element id + invariant).
class InvariantError : public Error {
public:
    InvariantError(std::string element, std::string invariant)
        : Error(element + ": " + invariant),
          element_(std::move(element)),
          invariant_(std::move(invariant)) {}

    const std::string& element() const noexcept { return element_; }
    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string element_;
    std::string invariant_;
};

//! An operation was called outside its domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

//! A well-posed computation did not produce a result (caps, exhausted search).
class ComputationError : public Error {
public:
    using Error::Error;
};

}  // namespace polyref
