#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cmc/graph/algorithms.hpp"
#include "cmc/graph/concept_graph.hpp"

namespace cmc::disambiguation {

// Pick a direction for an unresolved relates pair.
struct DirectionChoice {
  std::string a;  // a < b
  std::string b;
  std::vector<graph::DirectedEdge> options;  // [a -> b, b -> a], provenance resolved
};

// Remove one edge of a cycle.
struct CycleBreak {
  graph::Cycle cycle;
  std::vector<graph::DirectedEdge> options;  // every edge of the cycle, once
};

struct Ambiguity {
  // Stable within one graph revision, e.g. "r2/cycle/A/B/C".
  std::string id;
  std::variant<DirectionChoice, CycleBreak> kind;

  std::size_t option_count() const;
  std::vector<std::string> option_labels() const;
  std::string question() const;
};

struct Resolution {
  std::string ambiguity_id;
  std::size_t choice = 0;
};

// Direction choices (by endpoint pair) followed by cycle breaks (by cycle order).
// Empty exactly when refinement_complete(g).
std::vector<Ambiguity> enumerate_ambiguities(const graph::ConceptGraph& g,
                                             const graph::CycleSearchOptions& options = {});

struct AppliedResolution {
  graph::ConceptGraph graph;
  std::string summary;                          // human-readable log line
  std::optional<graph::DirectedEdge> chosen;    // direction picked
  std::optional<graph::DirectedEdge> removed;   // edge dropped to break a cycle
};

// Returns the refined graph with its revision bumped. Removing one leg of an
// unresolved relates pair settles that pair in the opposite direction.
// Throws Error{StaleAmbiguity | UnknownAmbiguity | ChoiceOutOfRange}.
AppliedResolution apply_resolution(const graph::ConceptGraph& g, const Resolution& r,
                                   const graph::CycleSearchOptions& options = {});

bool refinement_complete(const graph::ConceptGraph& g);

nlohmann::json to_json(const Ambiguity& a);

}  // namespace cmc::disambiguation
