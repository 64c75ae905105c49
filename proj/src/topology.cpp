#include "oscsim/topology.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "oscsim/csv.hpp"
#include "oscsim/errors.hpp"
#include "oscsim/rng.hpp"

namespace oscsim {

TopologyMatrix chain_topology(std::size_t p, ChainDirection dir, bool periodic) {
  if (p < 2) throw ConfigError("TooSmall: chain topology needs at least 2 oscillators");
  TopologyMatrix t(p, periodic);
  for (std::size_t i = 1; i < p; ++i) t.set_edge(i, i - 1);
  if (periodic) t.set_edge(0, p - 1);
  if (dir == ChainDirection::bidirectional) {
    for (std::size_t i = 0; i + 1 < p; ++i) t.set_edge(i, i + 1);
    if (periodic) t.set_edge(p - 1, 0);
  }
  return t;
}

TopologyMatrix mesh2d_topology(std::size_t rows, std::size_t cols, bool periodic) {
  if (rows < 1 || cols < 1 || rows * cols < 2)
    throw ConfigError("TooSmall: mesh topology needs at least 2 nodes");
  const std::size_t p = rows * cols;
  TopologyMatrix t(p, periodic);
  auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = id(r, c);
      if (c + 1 < cols) {
        t.set_edge(i, id(r, c + 1));
        t.set_edge(id(r, c + 1), i);
      } else if (periodic && cols > 2) {
        t.set_edge(i, id(r, 0));
        t.set_edge(id(r, 0), i);
      }
      if (r + 1 < rows) {
        t.set_edge(i, id(r + 1, c));
        t.set_edge(id(r + 1, c), i);
      } else if (periodic && rows > 2) {
        t.set_edge(i, id(0, c));
        t.set_edge(id(0, c), i);
      }
    }
  }
  return t;
}

TopologyMatrix random_topology(std::size_t p, double edge_probability,
                               std::uint64_t seed, bool directed) {
  if (p < 2) throw ConfigError("TooSmall: random topology needs at least 2 oscillators");
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0))
    throw ConfigError("InvalidProbability: edge probability must be in [0, 1]");
  const std::uint64_t s = derive_seed(seed, kTopologyStreamTag);
  TopologyMatrix t(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (i == j) continue;
      if (!directed && j > i) continue;  // sample each unordered pair once
      const bool present = counter_uniform(s, i * p + j) < edge_probability;
      if (present) {
        t.set_edge(i, j);
        if (!directed) t.set_edge(j, i);
      }
    }
  }
  return t;
}

TopologyMatrix load_topology_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open topology file: " + path.string());
  std::vector<std::vector<int>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<int> row;
    for (const auto& cell : split_csv_line(line)) {
      std::size_t pos = 0;
      int v = 0;
      try {
        v = std::stoi(cell, &pos);
      } catch (const std::exception&) {
        throw ConfigError("ParseError: topology line " + std::to_string(line_no) +
                          ": not an integer: '" + cell + "'");
      }
      if (pos != cell.size() || (v != 0 && v != 1))
        throw ConfigError("ParseError: topology line " + std::to_string(line_no) +
                          ": entries must be 0 or 1, got '" + cell + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  const std::size_t p = rows.size();
  if (p < 1) throw ConfigError("ParseError: topology file is empty");
  TopologyMatrix t(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (rows[i].size() != p)
      throw ConfigError("ParseError: topology row " + std::to_string(i + 1) + " has " +
                        std::to_string(rows[i].size()) + " columns, expected " +
                        std::to_string(p));
    for (std::size_t j = 0; j < p; ++j) {
      if (i == j && rows[i][j] != 0)
        throw ConfigError("ParseError: topology diagonal must be zero (row " +
                          std::to_string(i + 1) + ")");
      if (rows[i][j]) t.set_edge(i, j);
    }
  }
  return t;
}

}  // namespace oscsim
