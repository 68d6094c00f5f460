#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlca {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text that does not follow a grammar. `position` is a 0-based byte
// offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A resource cap (table size, subset states, search budget) would be exceeded.
// Never thrown after partial results were returned.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Caller violated an operation's precondition (modulus mismatch, non-prime
// modulus where a field is required, wrong window length, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlca
