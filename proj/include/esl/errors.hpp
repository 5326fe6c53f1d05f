#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace esl {

// Base of every error raised by the library. `code()` is a stable,
// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Precondition or configuration violation.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid-argument", what) {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t lhs, std::size_t rhs)
      : Error("dimension-mismatch", "incompatible truncations: dim " + std::to_string(lhs) +
                                        " vs dim " + std::to_string(rhs)) {}
};

// The truncated basis cannot hold the requested state or operator action.
class TruncationOverflow : public Error {
 public:
  TruncationOverflow(const std::string& what, int required_n)
      : Error("truncation-overflow",
              what + " (required truncation N >= " + std::to_string(required_n) + ")"),
        required_n_(required_n) {}
  int required_n() const noexcept { return required_n_; }

 private:
  int required_n_;
};

// A closed form was evaluated where it divides by zero (|alpha| -> 0).
class SingularPoint : public Error {
 public:
  explicit SingularPoint(const std::string& what) : Error("singular-point", what) {}
};

class InvalidFamily : public Error {
 public:
  explicit InvalidFamily(const std::string& what) : Error("invalid-family", what) {}
};

class FamilyEvaluationError : public Error {
 public:
  explicit FamilyEvaluationError(const std::string& what) : Error("family-evaluation", what) {}
};

class LimitDivergence : public Error {
 public:
  explicit LimitDivergence(const std::string& what) : Error("limit-divergence", what) {}
};

class GridTooLarge : public Error {
 public:
  explicit GridTooLarge(const std::string& what) : Error("grid-too-large", what) {}
};

// A statistic is undefined for the given state (e.g. Mandel Q at <n> = 0).
class UndefinedQuantity : public Error {
 public:
  explicit UndefinedQuantity(const std::string& what) : Error("undefined-quantity", what) {}
};

}  // namespace esl
