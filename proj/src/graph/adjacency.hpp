#pragma once

#include <cstddef>
#include <vector>

#include "cmc/graph/concept_graph.hpp"

namespace cmc::graph::detail {

// Index-based view of a ConceptGraph with parallel edges collapsed.
struct Adjacency {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> out;  // sorted, unique
  std::vector<std::vector<std::size_t>> in;   // sorted, unique

  explicit Adjacency(const ConceptGraph& g);
};

// Tarjan; returns component id per node (ids in reverse topological order).
std::vector<std::size_t> strongly_connected_components(const Adjacency& adj,
                                                       std::size_t& count);

}  // namespace cmc::graph::detail
