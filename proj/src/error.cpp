#include "lrp/error.hpp"

namespace lrp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::resource: return "resource";
    case ErrorKind::io: return "io";
    case ErrorKind::format: return "format";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::disconnected: return "disconnected";
    case ErrorKind::unsupported: return "unsupported";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace lrp
