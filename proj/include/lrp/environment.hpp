#pragma once

#include <cstddef>
#include <cstdint>

#include "lrp/graph.hpp"
#include "lrp/lattice.hpp"
#include "lrp/params.hpp"

namespace lrp {

// A sampled environment restricted to the box [-n, n]^d. Graph vertex i is box index i.
struct Environment {
  LrpParams params;
  Box box;
  Graph graph;
  std::uint64_t class_count = 0;  // displacement classes visited while sampling
};

struct SampleOptions {
  std::size_t memory_budget_bytes = std::size_t{4} << 30;
  int threads = 1;
};

// Displacement v is canonical when its first nonzero coordinate is positive.
bool is_canonical(const Point& v, int d);

// Number of ordered pairs (x, x+v) with both ends in [-n, n]^d.
std::int64_t pair_count(const Point& v, int d, std::int64_t n);

// Samples every box pair independently. Each displacement class draws an exact binomial
// count from its own counter-based stream and places that many distinct pairs.
Environment sample_environment(const LrpParams& params, const SampleOptions& options = {});

// Nearest-neighbour lattice on [-n, n]^d.
Environment lattice_environment(int d, std::int64_t n);

// Bytes the sampler expects to need for these parameters.
std::size_t estimated_sample_bytes(const LrpParams& params);

}  // namespace lrp
