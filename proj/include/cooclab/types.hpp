#ifndef COOCLAB_TYPES_HPP
#define COOCLAB_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>

namespace cooclab {

using Scalar = double;
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

// Every failure carries a stable code string (e.g. "RowSumOutOfTolerance")
// so callers and tests can match on it without parsing the message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& what) {
  throw Error(std::move(code), what);
}

}  // namespace cooclab

#endif
