#pragma once

#include <cstdint>
#include <vector>

#include "fairmatch/instance.hpp"

namespace fairmatch::fixtures {

// 1 driver (quota 1), 1 request type, p = 1, w = 0.7, T = 1.
Instance single_edge();

// 1 driver (quota 1), types v1, v2 with r = 1, p = 1, w = 1 and 0.5, T = 2.
// Under Uniform: profit 0.75, fairness 0.5.
Instance uniform_t2();

// Two drivers (quota 1) x two request types, complete, p = 1, w = 1, r = 1,
// T = 2. OPT-F = 1.
Instance complete_2x2();

// Random tiny instances: T in [1, 4], 1-2 drivers, 1-2 request types, each
// with at least one edge. Deterministic in `seed`.
std::vector<Instance> tiny_instances(std::size_t count, std::uint64_t seed);

}  // namespace fairmatch::fixtures
