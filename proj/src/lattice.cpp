#include "lrp/lattice.hpp"

#include <limits>

#include "lrp/error.hpp"

namespace lrp {

Norm parse_norm(const std::string& name) {
  if (name == "euclidean" || name == "l2") return Norm::euclidean;
  if (name == "linf" || name == "max") return Norm::linf;
  fail(ErrorKind::invalid_argument, "unknown norm '" + name + "'");
}

const char* to_string(Norm norm) { return norm == Norm::linf ? "linf" : "euclidean"; }

void LrpParams::validate() const {
  require(d >= 1 && d <= kMaxDim, "dimension must be in [1, 4]");
  require(std::isfinite(s) && s > d, "s must exceed d");
  require(q >= 0.0 && q <= 1.0, "q must lie in [0, 1]");
  require(n >= 1, "box radius n must be >= 1");
}

Box::Box(int d, std::int64_t n) : d_(d), n_(n), side_(2 * n + 1) {
  require(d >= 1 && d <= kMaxDim, "dimension must be in [1, 4]");
  require(n >= 0, "box radius must be non-negative");
  size_ = 1;
  for (int i = 0; i < d; ++i) {
    if (size_ > std::numeric_limits<std::int64_t>::max() / side_)
      fail(ErrorKind::resource, "box too large to index");
    size_ *= side_;
  }
}

}  // namespace lrp
