#include "fairmatch/fixtures.hpp"

#include <cmath>

#include "fairmatch/random.hpp"

namespace fairmatch::fixtures {

Instance single_edge() {
  return Instance({{"u", 1, std::nullopt}}, {{"v", 1.0, std::nullopt}}, {{0, 0, 1.0, 0.7}}, 1);
}

Instance uniform_t2() {
  return Instance({{"u", 1, std::nullopt}},
                  {{"v1", 1.0, std::nullopt}, {"v2", 1.0, std::nullopt}},
                  {{0, 0, 1.0, 1.0}, {0, 1, 1.0, 0.5}}, 2);
}

Instance complete_2x2() {
  return Instance({{"a", 1, std::nullopt}, {"b", 1, std::nullopt}},
                  {{"v1", 1.0, std::nullopt}, {"v2", 1.0, std::nullopt}},
                  {{0, 0, 1.0, 1.0}, {0, 1, 1.0, 1.0}, {1, 0, 1.0, 1.0}, {1, 1, 1.0, 1.0}}, 2);
}

std::vector<Instance> tiny_instances(std::size_t count, std::uint64_t seed) {
  std::vector<Instance> out;
  Rng rng(seed);
  while (out.size() < count) {
    const int horizon = 1 + static_cast<int>(rng.index(4));
    const std::size_t m = 1 + rng.index(2);
    const std::size_t n = 1 + rng.index(2);

    std::vector<Driver> drivers;
    for (std::size_t u = 0; u < m; ++u)
      drivers.push_back({"u" + std::to_string(u), 1 + static_cast<int>(rng.index(2)), std::nullopt});

    // Rates in quarter steps, summing to T exactly.
    std::vector<RequestType> requests;
    if (n == 1) {
      requests.push_back({"v0", static_cast<double>(horizon), std::nullopt});
    } else {
      const double first = 0.25 * (1 + static_cast<double>(rng.index(4 * horizon - 1)));
      requests.push_back({"v0", first, std::nullopt});
      requests.push_back({"v1", horizon - first, std::nullopt});
    }

    std::vector<Edge> edges;
    for (std::size_t u = 0; u < m; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (rng.uniform() < 0.75)
          edges.push_back({u, v, std::round(rng.uniform(0.1, 1.0) * 100.0) / 100.0,
                           std::round(rng.uniform(0.0, 1.0) * 100.0) / 100.0});

    Instance inst(std::move(drivers), std::move(requests), std::move(edges), horizon);
    bool covered = true;
    for (RequestIndex v = 0; v < inst.num_request_types(); ++v)
      covered = covered && !inst.edges_of_request(v).empty();
    if (covered) out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace fairmatch::fixtures
