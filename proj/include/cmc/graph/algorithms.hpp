#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/graph/concept_graph.hpp"

namespace cmc::graph {

struct Cycle {
  // Rotation-canonical: starts at the lexicographically smallest node.
  std::vector<std::string> nodes;
  // Every edge between consecutive nodes (including the closing hop), in hop order.
  std::vector<DirectedEdge> edges;

  bool operator==(const Cycle&) const = default;
};

std::string to_string(const Cycle& c);  // "A -> B -> C -> A"

inline constexpr std::size_t kDefaultMaxCycleNodes = 25;

struct CycleSearchOptions {
  std::size_t max_nodes = kDefaultMaxCycleNodes;
};

// All simple directed cycles ordered by length, then by node list. The bare
// 2-cycle formed by an unresolved relates pair is a direction ambiguity, not
// a cycle, and is left out. Throws Error{GraphTooLarge} above the node cap.
std::vector<Cycle> find_simple_cycles(const ConceptGraph& g,
                                      const CycleSearchOptions& options = {});

// Standard d-separation of x and y given `given`. Requires a DAG.
bool d_separated(const ConceptGraph& g, std::string_view x, std::string_view y,
                 const std::vector<std::string>& given);

}  // namespace cmc::graph
