#pragma once

#include <stdexcept>
#include <string>

namespace sofic {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unparseable text, out-of-range indices, mismatched ranks or degrees.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

// A configured size cap (closure size, table order, ball size, degree) was hit.
class SizeLimit : public Error {
 public:
  SizeLimit(const std::string& what, std::size_t cap)
      : Error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

// A multiplication table violating a group axiom; the message names a witness.
class InvalidGroup : public Error {
 public:
  using Error::Error;
};

class InvalidCharacter : public Error {
 public:
  using Error::Error;
};

// A precondition of an operation does not hold for the given input.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

class CertificateRefused : public Error {
 public:
  using Error::Error;
};

}  // namespace sofic
