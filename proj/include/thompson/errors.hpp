#pragma once

#include <stdexcept>
#include <string>

namespace thompson {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A tree bitstring that is not the preorder encoding of a full binary tree,
// or a doubletree whose two trees disagree on the leaf count.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized element, base64 line or varint.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Corrupted or inconsistent on-disk data: checksum mismatch, key order
// violation, impossible radicand.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& what, std::string path = {})
      : Error(path.empty() ? what : what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Disk or memory budget exhausted. Work already committed to the cache is
// reused by the next run.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Arguments outside the domain of a formula (projection traces, masses,
// window lengths, grid points outside the support).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Computed data violates an invariant that valid inputs always satisfy, e.g.
// non-integral moments derived from a zeta column.
class InputCorruptionError : public Error {
 public:
  using Error::Error;
};

// An iterative numerical method failed from every starting point.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace thompson
