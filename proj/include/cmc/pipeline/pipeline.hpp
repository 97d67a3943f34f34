#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cmc/codegen/codegen.hpp"
#include "cmc/derivation/derivation.hpp"
#include "cmc/diagnostics.hpp"
#include "cmc/disambiguation/ambiguity.hpp"
#include "cmc/dsl/model.hpp"
#include "cmc/graph/concept_graph.hpp"

// Stages shared by the CLI and the session service, so that a batch compile
// and an interactive session run exactly the same code.
namespace cmc::pipeline {

struct ConceptualAnswer {
  disambiguation::Resolution resolution;
  std::string summary;  // informational; ignored when a log is read back
};

// JSON array of {phase:"conceptual", ambiguity_id, choice} entries, optionally
// followed by one {phase:"statistical", keep_covariates, keep_interactions,
// family, link} entry.
struct AnswerLog {
  std::vector<ConceptualAnswer> conceptual;
  std::optional<derivation::StatisticalChoices> statistical;
};

// Throws Error{MalformedAnswerLog}.
AnswerLog parse_answer_log(std::string_view text);
std::string serialize_answer_log(const AnswerLog& log);
nlohmann::json answer_log_json(const AnswerLog& log);

// Choice fields as used in the log and in request bodies. A family without a
// link means the family's canonical link. Throws Error{MalformedAnswerLog}.
derivation::StatisticalChoices parse_statistical_choices(const nlohmann::json& j);
nlohmann::json statistical_choices_json(const derivation::StatisticalChoices& c);

// A non-negative JSON integer, whether stored signed or unsigned.
inline bool is_choice_index(const nlohmann::json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0);
}

struct FrontEnd {
  dsl::ValidatedProgram program;  // cardinalities filled from data when given
  graph::ConceptGraph graph;
  std::vector<std::string> data_notes;
};

struct FrontEndResult {
  std::optional<FrontEnd> front;
  std::vector<Diagnostic> diagnostics;  // parse, validate, reconcile

  bool ok() const { return front.has_value(); }
};

// Parse, validate, and reconcile against the CSV when `data_path` is given.
// Data file failures throw Error{FileNotFound | MalformedCsv | EmptyFile}.
FrontEndResult load_program(std::string_view source,
                            const std::optional<std::string>& data_path);

// Conceptual refinement driven one answer at a time.
class Refinement {
 public:
  Refinement(graph::ConceptGraph initial, graph::CycleSearchOptions options);

  const graph::ConceptGraph& graph() const { return graph_; }
  const std::vector<disambiguation::Ambiguity>& pending() const { return pending_; }
  bool complete() const { return pending_.empty(); }
  const std::vector<ConceptualAnswer>& answers() const { return answers_; }

  // Leaves the state untouched when it throws.
  const ConceptualAnswer& apply(const disambiguation::Resolution& r);

 private:
  graph::ConceptGraph graph_;
  graph::CycleSearchOptions options_;
  std::vector<disambiguation::Ambiguity> pending_;
  std::vector<ConceptualAnswer> answers_;
};

struct Finalized {
  derivation::StatisticalModel model;
  derivation::StatisticalChoices normalized;  // every field filled in
  codegen::EmittedArtifact artifact;
};

// Derive, assemble and emit. `script_data_path` is the path written into the
// script. Throws the derivation and codegen errors.
Finalized finalize(const FrontEnd& front, const graph::ConceptGraph& refined,
                   const std::vector<ConceptualAnswer>& answers,
                   const derivation::StatisticalChoices& choices,
                   const std::optional<std::string>& script_data_path);

nlohmann::json to_json(const derivation::Suggestions& s);
nlohmann::json to_json(const derivation::ModelWarning& w);
nlohmann::json to_json(const Diagnostic& d);

// Reads CMC_MAX_GRAPH_NODES; throws Error{InvalidArgument} on a bad value.
graph::CycleSearchOptions cycle_options_from_env();

}  // namespace cmc::pipeline
