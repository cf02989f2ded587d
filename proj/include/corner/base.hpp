#pragma once
#include <stdexcept>
#include <string>

namespace corner {

// Error carries a machine-readable kind next to the human message.
// Kinds in use: parse, shape, relation, reference, corner, descent, modulus, arith.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, const std::string& kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace corner
