#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace framefit {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid construction input (weight exponents, grid sizes, tolerances, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Evaluation point outside the admissible interval.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Dimension / grid mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A normalization constant or intermediate left the finite range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A function handle produced a nonfinite value; carries the offending node.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double node)
      : Error(what + " at node " + std::to_string(node)), node_(node) {}
  double node() const noexcept { return node_; }

 private:
  double node_;
};

// A design-matrix entry came out nonfinite; carries its (row, col) position.
class AssemblyError : public Error {
 public:
  AssemblyError(const std::string& what, std::ptrdiff_t row, std::ptrdiff_t col)
      : Error(what + " at entry (" + std::to_string(row) + ", " + std::to_string(col) + ")"),
        row_(row),
        col_(col) {}
  std::ptrdiff_t row() const noexcept { return row_; }
  std::ptrdiff_t col() const noexcept { return col_; }

 private:
  std::ptrdiff_t row_;
  std::ptrdiff_t col_;
};

// Dense linear-algebra kernel failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A bound evaluator was called outside its regime of validity.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Rate-fit window is unusable (too few rows or contaminated by plateau rows).
class WindowError : public Error {
 public:
  using Error::Error;
};

// File I/O failure; carries the path.
class FileError : public Error {
 public:
  FileError(const std::string& what, const std::string& path)
      : Error(what + ": " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace framefit
