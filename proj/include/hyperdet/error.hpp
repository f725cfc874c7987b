#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hyperdet {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rank or extent mismatch, or a non-cubical input where a cubical one is required.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A multi-index component outside its extent.
class IndexError : public Error {
 public:
  IndexError(const std::string& what, std::size_t axis) : Error(what), axis_(axis) {}
  std::size_t axis() const noexcept { return axis_; }

 private:
  std::size_t axis_;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Fixed-width arithmetic would wrap.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A computation was refused because it exceeds a configured size budget.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::uint64_t required, std::uint64_t budget)
      : Error(what), required_(required), budget_(budget) {}
  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

class SymmetryError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& what, double norm) : Error(what), norm_(norm) {}
  double norm() const noexcept { return norm_; }

 private:
  double norm_;
};

// The operation is undefined for the given input (e.g. odd particle count).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class StorageError : public Error {
 public:
  using Error::Error;
};

class CorruptionError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperdet
