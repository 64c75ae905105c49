#pragma once

#include <cstdint>
#include <filesystem>

#include "oscsim/model.hpp"

namespace oscsim {

enum class ChainDirection { unidirectional, bidirectional };

// 1-D chain.  Unidirectional: i receives from i-1 (pipeline order); periodic
// closes the ring (0 receives from P-1).  Bidirectional adds the reverse
// edges.  Requires p >= 2.
TopologyMatrix chain_topology(std::size_t p, ChainDirection dir, bool periodic = false);

// rows x cols 4-neighbor mesh, bidirectional edges; periodic wraps both axes.
// Requires rows*cols >= 2.
TopologyMatrix mesh2d_topology(std::size_t rows, std::size_t cols, bool periodic = false);

// Off-diagonal entries i.i.d. Bernoulli(edge_probability) from the seed.
// directed=false samples each unordered pair once and mirrors it.
TopologyMatrix random_topology(std::size_t p, double edge_probability,
                               std::uint64_t seed, bool directed = true);

// Square CSV of 0/1 entries, zero diagonal.
TopologyMatrix load_topology_csv(const std::filesystem::path& path);

}  // namespace oscsim
