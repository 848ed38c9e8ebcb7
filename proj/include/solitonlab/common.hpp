#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
  invalid_argument = 1,
  not_antisymmetric = 2,
  constraint_violation = 3,
  integration_failure = 4,
  domain_error = 5,
  io_error = 6,
  schema_error = 7,
};

// Base exception for the library. The code is mapped 1:1 onto the C API
// status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Component of x orthogonal to the unit vector t.
inline Vec perp(const Vec& x, const Vec& t) { return x - x.dot(t) * t; }

inline double sqr(double x) { return x * x; }

}  // namespace sl
