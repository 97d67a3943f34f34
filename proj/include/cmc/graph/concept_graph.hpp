#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cmc/dsl/model.hpp"

namespace cmc::graph {

enum class Provenance { FromCauses, FromRelatesResolved, FromRelatesUnresolved };

std::string_view provenance_name(Provenance p);
std::string_view certainty_name(dsl::Certainty c);

struct DirectedEdge {
  std::string from;
  std::string to;
  Provenance provenance = Provenance::FromCauses;
  dsl::Certainty certainty = dsl::Certainty::Assume;

  auto operator<=>(const DirectedEdge&) const = default;
  bool operator==(const DirectedEdge&) const = default;
};

std::string to_string(const DirectedEdge& e);  // "A -> B"

// Immutable graph IR. Nodes are measure names in lexicographic order; edges
// are sorted and de-duplicated. Every mutation yields a new value with the
// revision bumped, which lets callers detect stale references.
class ConceptGraph {
 public:
  ConceptGraph() = default;
  ConceptGraph(std::vector<std::string> nodes, std::vector<DirectedEdge> edges,
               std::uint64_t revision = 0);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<DirectedEdge>& edges() const { return edges_; }
  std::uint64_t revision() const { return revision_; }

  bool has_node(std::string_view name) const;
  // Index into nodes(); throws Error{UnknownNode}.
  std::size_t index_of(std::string_view name) const;
  std::size_t size() const { return nodes_.size(); }

  bool has_unresolved() const;
  ConceptGraph with_edges(std::vector<DirectedEdge> edges) const;

  bool operator==(const ConceptGraph&) const = default;

 private:
  std::vector<std::string> nodes_;
  std::vector<DirectedEdge> edges_;
  std::uint64_t revision_ = 0;
};

ConceptGraph build_graph(const dsl::ConceptualModel& model);

enum class Direction { Forward, Backward };

// Descendants (Forward) or ancestors (Backward) of `v`, excluding `v`, sorted.
std::vector<std::string> reachable(const ConceptGraph& g, std::string_view v,
                                   Direction dir);

// True when the directed graph (counting every edge, including both legs of
// unresolved relates pairs) has no cycle.
bool is_acyclic(const ConceptGraph& g);

// Topological layer per node for drawing: longest path from a source over the
// strongly-connected-component condensation.
std::map<std::string, int> layout_layers(const ConceptGraph& g);

// {nodes:[...], edges:[{from,to,provenance,certainty}]} (+ layers when asked).
nlohmann::json to_json(const ConceptGraph& g, bool with_layout = false);

}  // namespace cmc::graph
