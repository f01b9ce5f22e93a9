#pragma once

#include <cstdint>
#include <string>

namespace lrp {

enum class Norm : std::uint8_t { euclidean = 0, linf = 1 };

Norm parse_norm(const std::string& name);
const char* to_string(Norm norm);

// Model parameters for the percolation environment on the box [-n, n]^d.
struct LrpParams {
  int d = 1;
  double s = 2.0;
  double q = 1.0;
  Norm norm = Norm::euclidean;
  std::int64_t n = 16;
  bool long_range_enabled = true;
  std::uint64_t seed = 0;

  // Throws invalid-argument unless 1 <= d <= 4, s > d, q in [0,1], n >= 1.
  void validate() const;
};

}  // namespace lrp
