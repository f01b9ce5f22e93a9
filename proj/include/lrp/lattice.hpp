#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>

#include "lrp/params.hpp"

namespace lrp {

inline constexpr int kMaxDim = 4;
using Point = std::array<std::int64_t, kMaxDim>;

inline double norm_of(const Point& v, int d, Norm norm) {
  if (norm == Norm::linf) {
    std::int64_t m = 0;
    for (int i = 0; i < d; ++i) m = std::max<std::int64_t>(m, std::llabs(v[i]));
    return static_cast<double>(m);
  }
  double acc = 0;
  for (int i = 0; i < d; ++i) acc += static_cast<double>(v[i]) * static_cast<double>(v[i]);
  return std::sqrt(acc);
}

inline std::int64_t linf_of(const Point& v, int d) {
  std::int64_t m = 0;
  for (int i = 0; i < d; ++i) m = std::max<std::int64_t>(m, std::llabs(v[i]));
  return m;
}

inline bool is_unit(const Point& v, int d) {
  std::int64_t l1 = 0;
  for (int i = 0; i < d; ++i) l1 += std::llabs(v[i]);
  return l1 == 1;
}

// The box [-n, n]^d with x -> sum_i (x_i + n) (2n+1)^i.
class Box {
 public:
  Box() = default;
  Box(int d, std::int64_t n);

  int dim() const { return d_; }
  std::int64_t radius() const { return n_; }
  std::int64_t side() const { return side_; }
  std::int64_t size() const { return size_; }

  bool contains(const Point& x) const {
    for (int i = 0; i < d_; ++i)
      if (x[i] < -n_ || x[i] > n_) return false;
    return true;
  }
  std::int64_t index(const Point& x) const {
    std::int64_t idx = 0;
    for (int i = d_ - 1; i >= 0; --i) idx = idx * side_ + (x[i] + n_);
    return idx;
  }
  Point point(std::int64_t idx) const {
    Point x{};
    for (int i = 0; i < d_; ++i) {
      x[i] = idx % side_ - n_;
      idx /= side_;
    }
    return x;
  }
  std::int64_t linf(std::int64_t idx) const { return linf_of(point(idx), d_); }
  std::int64_t origin() const { return index(Point{}); }

 private:
  int d_ = 1;
  std::int64_t n_ = 0;
  std::int64_t side_ = 1;
  std::int64_t size_ = 1;
};

// Calls f(v) for every v in [-r, r]^d in index order.
template <class F>
void for_each_in_cube(int d, std::int64_t r, F&& f) {
  Point v{};
  for (int i = 0; i < d; ++i) v[i] = -r;
  while (true) {
    f(static_cast<const Point&>(v));
    int i = 0;
    while (i < d && v[i] == r) {
      v[i] = -r;
      ++i;
    }
    if (i == d) return;
    ++v[i];
  }
}

}  // namespace lrp
