#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ehz {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error categories surfaced through the C API as status codes.
enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  Degenerate,
  Unbounded,
  BudgetExceeded,
  Infeasible,
  Parse,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Absolute tolerance on unit-normalized geometric data.
inline constexpr double kGeomTol = 1e-9;

}  // namespace ehz
