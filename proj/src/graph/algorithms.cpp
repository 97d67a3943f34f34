#include "cmc/graph/algorithms.hpp"

#include <array>
#include <algorithm>
#include <set>

#include "adjacency.hpp"
#include "cmc/error.hpp"

namespace cmc::graph {

std::string to_string(const Cycle& c) {
  std::string out;
  for (const auto& n : c.nodes) out += n + " -> ";
  return c.nodes.empty() ? out : out + c.nodes.front();
}

namespace {

// Johnson's elementary-circuit search. Circuits are found from each start
// vertex s within the strongly connected component of s in the subgraph
// induced by vertices >= s, so every circuit is reported exactly once,
// rooted at its smallest vertex.
class CircuitFinder {
 public:
  explicit CircuitFinder(const detail::Adjacency& adj)
      : adj_(adj), blocked_(adj.n), blocked_by_(adj.n), in_scope_(adj.n) {}

  std::vector<std::vector<std::size_t>> run() {
    for (start_ = 0; start_ < adj_.n; ++start_) {
      if (!scope_component()) continue;
      for (std::size_t v = start_; v < adj_.n; ++v) {
        blocked_[v] = false;
        blocked_by_[v].clear();
      }
      circuit(start_);
    }
    return std::move(found_);
  }

 private:
  // Marks the SCC of start_ inside the subgraph {start_..n-1}.
  bool scope_component() {
    detail::Adjacency sub = adj_;
    for (std::size_t v = 0; v < adj_.n; ++v) {
      if (v < start_) {
        sub.out[v].clear();
        continue;
      }
      auto& l = sub.out[v];
      l.erase(std::remove_if(l.begin(), l.end(),
                             [&](std::size_t w) { return w < start_; }),
              l.end());
    }
    std::size_t count = 0;
    auto comp = detail::strongly_connected_components(sub, count);
    std::size_t members = 0;
    for (std::size_t v = 0; v < adj_.n; ++v) {
      in_scope_[v] = v >= start_ && comp[v] == comp[start_];
      members += in_scope_[v] ? 1 : 0;
    }
    return members > 1;
  }

  void unblock(std::size_t u) {
    blocked_[u] = false;
    auto waiting = std::move(blocked_by_[u]);
    blocked_by_[u].clear();
    for (std::size_t w : waiting) {
      if (blocked_[w]) unblock(w);
    }
  }

  bool circuit(std::size_t v) {
    bool closed = false;
    path_.push_back(v);
    blocked_[v] = true;
    for (std::size_t w : adj_.out[v]) {
      if (!in_scope_[w]) continue;
      if (w == start_) {
        found_.push_back(path_);
        closed = true;
      } else if (!blocked_[w] && circuit(w)) {
        closed = true;
      }
    }
    if (closed) {
      unblock(v);
    } else {
      for (std::size_t w : adj_.out[v]) {
        if (in_scope_[w]) blocked_by_[w].insert(v);
      }
    }
    path_.pop_back();
    return closed;
  }

  const detail::Adjacency& adj_;
  std::size_t start_ = 0;
  std::vector<bool> blocked_;
  std::vector<std::set<std::size_t>> blocked_by_;
  std::vector<bool> in_scope_;
  std::vector<std::size_t> path_;
  std::vector<std::vector<std::size_t>> found_;
};

std::vector<DirectedEdge> edges_between(const ConceptGraph& g, const std::string& from,
                                        const std::string& to) {
  std::vector<DirectedEdge> out;
  for (const auto& e : g.edges()) {
    if (e.from == from && e.to == to) out.push_back(e);
  }
  return out;
}

bool all_unresolved(const std::vector<DirectedEdge>& edges) {
  return std::all_of(edges.begin(), edges.end(), [](const DirectedEdge& e) {
    return e.provenance == Provenance::FromRelatesUnresolved;
  });
}

}  // namespace

std::vector<Cycle> find_simple_cycles(const ConceptGraph& g,
                                      const CycleSearchOptions& options) {
  if (g.size() > options.max_nodes) {
    throw Error(ErrorCode::GraphTooLarge,
                "graph has " + std::to_string(g.size()) +
                    " nodes; cycle search is limited to " +
                    std::to_string(options.max_nodes));
  }
  detail::Adjacency adj(g);
  std::vector<Cycle> cycles;
  for (const auto& path : CircuitFinder(adj).run()) {
    Cycle c;
    for (std::size_t v : path) c.nodes.push_back(g.nodes()[v]);
    std::vector<std::vector<DirectedEdge>> hops;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      hops.push_back(edges_between(g, c.nodes[i], c.nodes[(i + 1) % c.nodes.size()]));
    }
    if (hops.size() == 2 && all_unresolved(hops[0]) && all_unresolved(hops[1])) {
      continue;
    }
    for (auto& hop : hops) c.edges.insert(c.edges.end(), hop.begin(), hop.end());
    cycles.push_back(std::move(c));
  }
  std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
  });
  return cycles;
}

bool d_separated(const ConceptGraph& g, std::string_view x, std::string_view y,
                 const std::vector<std::string>& given) {
  std::size_t xi = g.index_of(x);
  std::size_t yi = g.index_of(y);
  if (xi == yi) {
    throw Error(ErrorCode::InvalidArgument, "d-separation needs two distinct nodes");
  }
  if (!is_acyclic(g)) {
    throw Error(ErrorCode::GraphNotAcyclic,
                "d-separation is only defined on an acyclic graph");
  }
  detail::Adjacency adj(g);
  std::vector<bool> in_given(adj.n, false);
  for (const auto& z : given) {
    std::size_t zi = g.index_of(z);
    if (zi == xi || zi == yi) {
      throw Error(ErrorCode::InvalidArgument,
                  "conditioning set must not contain '" + z + "'");
    }
    in_given[zi] = true;
  }

  // Nodes that are in `given` or have a descendant in it: colliders there are open.
  std::vector<bool> opens_collider(adj.n, false);
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < adj.n; ++v) {
    if (in_given[v]) {
      opens_collider[v] = true;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t p : adj.in[v]) {
      if (!opens_collider[p]) {
        opens_collider[p] = true;
        stack.push_back(p);
      }
    }
  }

  // Reachability over (node, arrived-from-child?) states: "up" means the
  // trail entered the node against an edge, "down" along one.
  enum : int { kUp = 0, kDown = 1 };
  std::vector<std::array<bool, 2>> visited(adj.n, {false, false});
  std::vector<std::pair<std::size_t, int>> frontier{{xi, kUp}};
  while (!frontier.empty()) {
    auto [v, dir] = frontier.back();
    frontier.pop_back();
    if (visited[v][dir]) continue;
    visited[v][dir] = true;
    if (v == yi) return false;
    if (dir == kUp && !in_given[v]) {
      for (std::size_t p : adj.in[v]) frontier.push_back({p, kUp});
      for (std::size_t c : adj.out[v]) frontier.push_back({c, kDown});
    } else if (dir == kDown) {
      if (!in_given[v]) {
        for (std::size_t c : adj.out[v]) frontier.push_back({c, kDown});
      }
      if (opens_collider[v]) {
        for (std::size_t p : adj.in[v]) frontier.push_back({p, kUp});
      }
    }
  }
  return true;
}

}  // namespace cmc::graph
