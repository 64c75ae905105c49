#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oscsim/errors.hpp"
#include "oscsim/topology.hpp"

using namespace oscsim;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream f(p);
  f << text;
  return p;
}

}  // namespace

TEST_SUITE("topology") {

TEST_CASE("unidirectional chain follows pipeline order") {
  const auto t = chain_topology(4, ChainDirection::unidirectional);
  CHECK(t.edge_count() == 3);
  CHECK(t.influenced_by(1, 0));
  CHECK(t.influenced_by(2, 1));
  CHECK(t.influenced_by(3, 2));
  CHECK_FALSE(t.influenced_by(0, 1));
  CHECK(t.in_degree(0) == 0);
}

TEST_CASE("periodic unidirectional pair is a 2-cycle") {
  const auto t = chain_topology(2, ChainDirection::unidirectional, true);
  CHECK(t.influenced_by(0, 1));
  CHECK(t.influenced_by(1, 0));
  CHECK(t.edge_count() == 2);
  CHECK(t.periodic());
}

TEST_CASE("bidirectional chain") {
  const auto t = chain_topology(4, ChainDirection::bidirectional);
  CHECK(t.edge_count() == 6);
  CHECK(t.influenced_by(1, 0));
  CHECK(t.influenced_by(0, 1));
  CHECK(t.in_degree(0) == 1);
  CHECK(t.in_degree(1) == 2);
}

TEST_CASE("chains need two oscillators") {
  CHECK_THROWS_AS(chain_topology(1, ChainDirection::bidirectional), ConfigError);
}

TEST_CASE("degenerate mesh equals the bidirectional chain") {
  CHECK(mesh2d_topology(1, 4) == chain_topology(4, ChainDirection::bidirectional));
  CHECK(mesh2d_topology(4, 1) == chain_topology(4, ChainDirection::bidirectional));
}

TEST_CASE("3x3 mesh degrees") {
  const auto t = mesh2d_topology(3, 3);
  CHECK(t.size() == 9);
  CHECK(t.in_degree(0) == 2);  // corner
  CHECK(t.in_degree(1) == 3);  // edge
  CHECK(t.in_degree(4) == 4);  // center
  CHECK(t.edge_count() == 24);
}

TEST_CASE("periodic 3x3 mesh is 4-regular") {
  const auto t = mesh2d_topology(3, 3, true);
  for (std::size_t i = 0; i < 9; ++i) CHECK(t.in_degree(i) == 4);
  CHECK(t.edge_count() == 36);
}

TEST_CASE("periodic wrap is skipped when it would duplicate an edge") {
  // along a length-2 axis the wrap edge coincides with the interior edge
  const auto t = mesh2d_topology(2, 2, true);
  CHECK(t.entries() == mesh2d_topology(2, 2, false).entries());
  for (std::size_t i = 0; i < 4; ++i) CHECK(t.in_degree(i) == 2);
}

TEST_CASE("random topology respects probability extremes") {
  const auto none = random_topology(6, 0.0, 1);
  CHECK(none.edge_count() == 0);
  const auto full = random_topology(6, 1.0, 1);
  CHECK(full.edge_count() == 30);
  for (std::size_t i = 0; i < 6; ++i) CHECK_FALSE(full.influenced_by(i, i));
}

TEST_CASE("random topology is deterministic in the seed") {
  CHECK(random_topology(12, 0.5, 3) == random_topology(12, 0.5, 3));
  CHECK(random_topology(12, 0.5, 3) != random_topology(12, 0.5, 4));
}

TEST_CASE("undirected sampling mirrors every edge") {
  const auto t = random_topology(10, 0.4, 5, false);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      CHECK(t.influenced_by(i, j) == t.influenced_by(j, i));
}

TEST_CASE("bad probability is rejected") {
  CHECK_THROWS_AS(random_topology(4, 1.5, 1), ConfigError);
  CHECK_THROWS_AS(random_topology(4, -0.1, 1), ConfigError);
}

TEST_CASE("topology csv round trip") {
  const auto p = temp_file("oscsim_topo_ok.csv", "0,1,0\n1,0,1\n0,1,0\n");
  const auto t = load_topology_csv(p);
  CHECK(t == chain_topology(3, ChainDirection::bidirectional));
}

TEST_CASE("topology csv rejects bad input") {
  CHECK_THROWS_AS(
      load_topology_csv(temp_file("oscsim_topo_rect.csv", "0,1\n1,0\n0,1\n")),
      ConfigError);
  CHECK_THROWS_AS(load_topology_csv(temp_file("oscsim_topo_diag.csv", "1,0\n0,0\n")),
                  ConfigError);
  CHECK_THROWS_AS(load_topology_csv(temp_file("oscsim_topo_char.csv", "0,x\n1,0\n")),
                  ConfigError);
  CHECK_THROWS_AS(load_topology_csv(fs::temp_directory_path() / "oscsim_missing.csv"),
                  SimError);
}

}
