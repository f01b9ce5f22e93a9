#pragma once

#include <stdexcept>
#include <string>

namespace lrp {

enum class ErrorKind {
  invalid_argument,
  precondition,
  resource,
  io,
  format,
  convergence,
  disconnected,
  unsupported
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::invalid_argument, what);
}

inline void require_pre(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::precondition, what);
}

}  // namespace lrp
