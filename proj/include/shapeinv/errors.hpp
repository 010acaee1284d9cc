#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shapeinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Raised when evaluation leaves the real domain (ln of non-positive, division
/// by zero, overflow). Carries the printed offending subtree.
class DomainError : public Error {
 public:
  DomainError(const std::string& reason, const std::string& subtree)
      : Error(reason + " in " + subtree), subtree_(subtree) {}
  const std::string& subtree() const noexcept { return subtree_; }

 private:
  std::string subtree_;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class NotShapeInvariant : public Error {
 public:
  explicit NotShapeInvariant(double max_deviation)
      : Error("remainder is x-dependent (max deviation " +
              std::to_string(max_deviation) + ")"),
        max_deviation_(max_deviation) {}
  double max_deviation() const noexcept { return max_deviation_; }

 private:
  double max_deviation_;
};

class NonNormalizable : public Error {
 public:
  NonNormalizable(double left_edge, double right_edge)
      : Error("ground state does not decay at the grid edges (relative edge "
              "magnitudes " +
              std::to_string(left_edge) + ", " + std::to_string(right_edge) +
              ")"),
        left_(left_edge),
        right_(right_edge) {}
  double left_edge() const noexcept { return left_; }
  double right_edge() const noexcept { return right_; }

 private:
  double left_;
  double right_;
};

class LevelUnbound : public Error {
 public:
  explicit LevelUnbound(int level)
      : Error("level " + std::to_string(level) + " is not bound"),
        level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

class WindowExhausted : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  GridMismatch() : Error("grid functions live on different grids") {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : Error(what + " after " + std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

}  // namespace shapeinv
