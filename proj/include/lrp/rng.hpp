#pragma once

#include <cstdint>
#include <limits>

namespace lrp {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream domains keep unrelated uses of the same seed apart.
enum class Stream : std::uint64_t {
  edge_class = 1,
  walker = 2,
  replicate = 3,
  instance = 4,
};

// Counter-based generator: output k of stream (seed, domain, id) is a pure function
// of those values, so results do not depend on scheduling.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, Stream domain, std::uint64_t id)
      : key_(mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                   mix64(static_cast<std::uint64_t>(domain) * 0xd1b54a32d192ed03ULL + id))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline std::uint64_t derive_seed(std::uint64_t seed, Stream domain, std::uint64_t a,
                                 std::uint64_t b = 0) {
  StreamRng g(seed, domain, mix64(a) ^ (b * 0x9e3779b97f4a7c15ULL));
  return g();
}

}  // namespace lrp
