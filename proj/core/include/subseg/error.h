#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subseg {

// Base class of every data error raised by the library: malformed input
// files, broken invariants, lossy input handed to an inverse transform.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid UTF-8. The offset is counted in bytes from the start of the stream.
class DecodeError : public Error {
 public:
  DecodeError(std::size_t byte_offset, const std::string& what)
      : Error("invalid UTF-8 at byte offset " + std::to_string(byte_offset) +
              ": " + what),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// A line of a text format that does not parse. Lines are 1-based.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a semantic invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace subseg
