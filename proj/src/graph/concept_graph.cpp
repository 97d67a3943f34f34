#include "cmc/graph/concept_graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "adjacency.hpp"
#include "cmc/error.hpp"

namespace cmc::graph {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::FromCauses: return "causes";
    case Provenance::FromRelatesResolved: return "relates_resolved";
    case Provenance::FromRelatesUnresolved: return "relates_unresolved";
  }
  return "causes";
}

std::string_view certainty_name(dsl::Certainty c) {
  return c == dsl::Certainty::Assume ? "assume" : "hypothesize";
}

std::string to_string(const DirectedEdge& e) { return e.from + " -> " + e.to; }

ConceptGraph::ConceptGraph(std::vector<std::string> nodes,
                           std::vector<DirectedEdge> edges, std::uint64_t revision)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), revision_(revision) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& e : edges_) {
    index_of(e.from);
    index_of(e.to);
  }
}

bool ConceptGraph::has_node(std::string_view name) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), name);
}

std::size_t ConceptGraph::index_of(std::string_view name) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end() || *it != name) {
    throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool ConceptGraph::has_unresolved() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const DirectedEdge& e) {
    return e.provenance == Provenance::FromRelatesUnresolved;
  });
}

ConceptGraph ConceptGraph::with_edges(std::vector<DirectedEdge> edges) const {
  return ConceptGraph(nodes_, std::move(edges), revision_ + 1);
}

ConceptGraph build_graph(const dsl::ConceptualModel& model) {
  std::vector<DirectedEdge> edges;
  for (const auto& rel : model.relationships) {
    if (rel.shape == dsl::RelationShape::Causes) {
      edges.push_back({rel.first, rel.second, Provenance::FromCauses, rel.certainty});
    } else {
      edges.push_back(
          {rel.first, rel.second, Provenance::FromRelatesUnresolved, rel.certainty});
      edges.push_back(
          {rel.second, rel.first, Provenance::FromRelatesUnresolved, rel.certainty});
    }
  }
  return ConceptGraph(model.measure_names(), std::move(edges));
}

namespace detail {

Adjacency::Adjacency(const ConceptGraph& g) : n(g.size()), out(n), in(n) {
  for (const auto& e : g.edges()) {
    std::size_t a = g.index_of(e.from), b = g.index_of(e.to);
    out[a].push_back(b);
    in[b].push_back(a);
  }
  for (auto* lists : {&out, &in}) {
    for (auto& l : *lists) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
  }
}

std::vector<std::size_t> strongly_connected_components(const Adjacency& adj,
                                                       std::size_t& count) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(adj.n, kUnset), low(adj.n, 0), comp(adj.n, kUnset);
  std::vector<bool> on_stack(adj.n, false);
  std::vector<std::size_t> stack;
  std::size_t next = 0;
  count = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj.out[v]) {
      if (index[w] == kUnset) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = count;
      } while (w != v);
      ++count;
    }
  };
  for (std::size_t v = 0; v < adj.n; ++v) {
    if (index[v] == kUnset) visit(v);
  }
  return comp;
}

}  // namespace detail

std::vector<std::string> reachable(const ConceptGraph& g, std::string_view v,
                                   Direction dir) {
  detail::Adjacency adj(g);
  std::size_t start = g.index_of(v);
  const auto& next = dir == Direction::Forward ? adj.out : adj.in;
  std::vector<bool> seen(adj.n, false);
  std::deque<std::size_t> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t w : next[u]) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < adj.n; ++i) {
    if (seen[i] && i != start) out.push_back(g.nodes()[i]);
  }
  return out;
}

bool is_acyclic(const ConceptGraph& g) {
  detail::Adjacency adj(g);
  std::size_t count = 0;
  detail::strongly_connected_components(adj, count);
  return count == adj.n;  // no self loops can exist
}

std::map<std::string, int> layout_layers(const ConceptGraph& g) {
  detail::Adjacency adj(g);
  std::size_t count = 0;
  auto comp = detail::strongly_connected_components(adj, count);
  // Tarjan numbers components in reverse topological order, so walking ids
  // from high to low visits every predecessor component first.
  std::vector<int> layer(count, 0);
  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t v = 0; v < adj.n; ++v) members[comp[v]].push_back(v);
  for (std::size_t c = count; c-- > 0;) {
    for (std::size_t v : members[c]) {
      for (std::size_t w : adj.out[v]) {
        if (comp[w] != c) layer[comp[w]] = std::max(layer[comp[w]], layer[c] + 1);
      }
    }
  }
  std::map<std::string, int> out;
  for (std::size_t v = 0; v < adj.n; ++v) out[g.nodes()[v]] = layer[comp[v]];
  return out;
}

nlohmann::json to_json(const ConceptGraph& g, bool with_layout) {
  nlohmann::json j;
  j["nodes"] = g.nodes();
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    j["edges"].push_back({{"from", e.from},
                          {"to", e.to},
                          {"provenance", provenance_name(e.provenance)},
                          {"certainty", certainty_name(e.certainty)}});
  }
  if (with_layout) j["layers"] = layout_layers(g);
  return j;
}

}  // namespace cmc::graph
