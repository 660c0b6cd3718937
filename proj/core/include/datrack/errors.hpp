#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace datrack {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of two operands are incompatible.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar or list argument is outside its documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A box or region lies entirely outside the frame or map it refers to.
class OutOfExtentError : public Error {
 public:
  using Error::Error;
};

/// No proposal survived scoring; the tracker treats this as a failure frame.
class NoCandidatesError : public Error {
 public:
  using Error::Error;
};

/// Template state queried before the first update.
class UninitializedError : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed persisted data. `offset` is the byte (or line) position where
/// decoding stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace datrack
