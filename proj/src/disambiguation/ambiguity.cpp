#include "cmc/disambiguation/ambiguity.hpp"

#include <algorithm>
#include <charconv>

#include "cmc/error.hpp"

namespace cmc::disambiguation {

using graph::DirectedEdge;
using graph::Provenance;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string revision_prefix(std::uint64_t revision) {
  return "r" + std::to_string(revision) + "/";
}

// Parses the "r<N>/" prefix; nullopt when malformed.
std::optional<std::uint64_t> id_revision(const std::string& id) {
  if (id.size() < 3 || id[0] != 'r') return std::nullopt;
  auto slash = id.find('/');
  if (slash == std::string::npos || slash == 1) return std::nullopt;
  std::uint64_t rev = 0;
  auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + slash, rev);
  if (ec != std::errc() || ptr != id.data() + slash) return std::nullopt;
  return rev;
}

}  // namespace

std::size_t Ambiguity::option_count() const {
  return std::visit([](const auto& k) { return k.options.size(); }, kind);
}

std::vector<std::string> Ambiguity::option_labels() const {
  return std::visit(overloaded{
                        [](const DirectionChoice& d) {
                          std::vector<std::string> out;
                          for (const auto& e : d.options) {
                            out.push_back("assume " + e.from + " causes " + e.to);
                          }
                          return out;
                        },
                        [](const CycleBreak& c) {
                          std::vector<std::string> out;
                          for (const auto& e : c.options) {
                            out.push_back("remove edge " + graph::to_string(e));
                          }
                          return out;
                        },
                    },
                    kind);
}

std::string Ambiguity::question() const {
  return std::visit(
      overloaded{
          [](const DirectionChoice& d) {
            return "'" + d.a + "' and '" + d.b +
                   "' are related but the direction of influence is unknown. "
                   "A statistical model needs a direction: which one causes the other?";
          },
          [](const CycleBreak& c) {
            return "The conceptual model contains the cycle " + graph::to_string(c.cycle) +
                   ". A cycle implies several different data generating processes, "
                   "so one edge must be removed before a model can be derived.";
          },
      },
      kind);
}

std::vector<Ambiguity> enumerate_ambiguities(const graph::ConceptGraph& g,
                                             const graph::CycleSearchOptions& options) {
  std::vector<Ambiguity> out;
  const std::string prefix = revision_prefix(g.revision());
  for (const auto& e : g.edges()) {
    if (e.provenance != Provenance::FromRelatesUnresolved || !(e.from < e.to)) continue;
    DirectionChoice d{e.from, e.to, {}};
    d.options.push_back({e.from, e.to, Provenance::FromRelatesResolved, e.certainty});
    d.options.push_back({e.to, e.from, Provenance::FromRelatesResolved, e.certainty});
    out.push_back(Ambiguity{prefix + "direction/" + e.from + "/" + e.to, std::move(d)});
  }
  // Edges are sorted by (from, to, ...) so direction choices are already in
  // endpoint order.
  if (!graph::is_acyclic(g)) {
    for (auto& cycle : graph::find_simple_cycles(g, options)) {
      std::string id = prefix + "cycle";
      for (const auto& n : cycle.nodes) id += "/" + n;
      CycleBreak c{cycle, cycle.edges};
      out.push_back(Ambiguity{std::move(id), std::move(c)});
    }
  }
  return out;
}

AppliedResolution apply_resolution(const graph::ConceptGraph& g, const Resolution& r,
                                   const graph::CycleSearchOptions& options) {
  auto rev = id_revision(r.ambiguity_id);
  if (!rev) {
    throw Error(ErrorCode::UnknownAmbiguity,
                "malformed ambiguity id '" + r.ambiguity_id + "'");
  }
  if (*rev != g.revision()) {
    throw Error(ErrorCode::StaleAmbiguity,
                "ambiguity '" + r.ambiguity_id + "' refers to revision " +
                    std::to_string(*rev) + " but the graph is at revision " +
                    std::to_string(g.revision()) + "; re-enumerate the questions");
  }
  auto current = enumerate_ambiguities(g, options);
  auto it = std::find_if(current.begin(), current.end(),
                         [&](const Ambiguity& a) { return a.id == r.ambiguity_id; });
  if (it == current.end()) {
    throw Error(ErrorCode::UnknownAmbiguity,
                "no pending ambiguity with id '" + r.ambiguity_id + "'");
  }
  if (r.choice >= it->option_count()) {
    throw Error(ErrorCode::ChoiceOutOfRange,
                "choice " + std::to_string(r.choice) + " is out of range for '" +
                    r.ambiguity_id + "' (" + std::to_string(it->option_count()) +
                    " options)");
  }

  std::vector<DirectedEdge> edges = g.edges();
  auto drop_pair = [&](const std::string& a, const std::string& b) {
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [&](const DirectedEdge& e) {
                                 return e.provenance == Provenance::FromRelatesUnresolved &&
                                        ((e.from == a && e.to == b) ||
                                         (e.from == b && e.to == a));
                               }),
                edges.end());
  };

  AppliedResolution out;
  if (auto* d = std::get_if<DirectionChoice>(&it->kind)) {
    const DirectedEdge& pick = d->options[r.choice];
    drop_pair(d->a, d->b);
    edges.push_back(pick);
    out.chosen = pick;
    out.summary = "assumed " + graph::to_string(pick) + " for relates(" + d->a + ", " +
                  d->b + ")";
  } else {
    const auto& c = std::get<CycleBreak>(it->kind);
    const DirectedEdge& victim = c.options[r.choice];
    out.removed = victim;
    if (victim.provenance == Provenance::FromRelatesUnresolved) {
      DirectedEdge kept{victim.to, victim.from, Provenance::FromRelatesResolved,
                        victim.certainty};
      drop_pair(victim.from, victim.to);
      edges.push_back(kept);
      out.chosen = kept;
      out.summary = "removed " + graph::to_string(victim) + " to break cycle " +
                    graph::to_string(c.cycle) + "; relates(" + victim.from + ", " +
                    victim.to + ") is now " + graph::to_string(kept);
    } else {
      edges.erase(std::find(edges.begin(), edges.end(), victim));
      out.summary = "removed " + graph::to_string(victim) + " to break cycle " +
                    graph::to_string(c.cycle);
    }
  }
  out.graph = g.with_edges(std::move(edges));
  return out;
}

bool refinement_complete(const graph::ConceptGraph& g) {
  return !g.has_unresolved() && graph::is_acyclic(g);
}

nlohmann::json to_json(const Ambiguity& a) {
  nlohmann::json j;
  j["id"] = a.id;
  j["question"] = a.question();
  j["options"] = a.option_labels();
  std::visit(overloaded{
                 [&](const DirectionChoice& d) {
                   j["kind"] = "direction";
                   j["variables"] = {d.a, d.b};
                 },
                 [&](const CycleBreak& c) {
                   j["kind"] = "cycle";
                   j["cycle"] = c.cycle.nodes;
                 },
             },
             a.kind);
  nlohmann::json edges = nlohmann::json::array();
  std::visit(
      [&](const auto& k) {
        for (const auto& e : k.options) {
          edges.push_back({{"from", e.from},
                           {"to", e.to},
                           {"provenance", graph::provenance_name(e.provenance)},
                           {"certainty", graph::certainty_name(e.certainty)}});
        }
      },
      a.kind);
  j["option_edges"] = edges;
  return j;
}

}  // namespace cmc::disambiguation
