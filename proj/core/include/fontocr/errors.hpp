#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fontocr {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed image or template-set file. Carries the byte offset where
/// decoding stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A caller-supplied value violates a documented precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Template data is structurally valid but unusable (constant glyph,
/// missing or duplicate font/label pair, bad manifest record).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace fontocr
