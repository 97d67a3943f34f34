#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/derivation/family.hpp"
#include "cmc/dsl/model.hpp"
#include "cmc/graph/concept_graph.hpp"

namespace cmc::derivation {

using VariableSet = std::vector<std::string>;  // sorted, unique

enum class Verdict {
  IncludeConfounder,
  IncludePrecision,
  ExcludeMediator,
  ExcludeColliderPath,
  ExcludeDescendantOfDV,
  ExcludeUnrelated,
};

std::string_view verdict_name(Verdict v);
bool is_included(Verdict v);

struct AdjustmentDecision {
  std::string variable;
  Verdict verdict = Verdict::ExcludeUnrelated;
  std::string rationale;

  bool operator==(const AdjustmentDecision&) const = default;
};

enum class WarningCode {
  QueryUnreachable,      // no directed path iv -> dv
  UnblockableBackdoor,   // dv is a direct cause of iv
  ConfoundingWarning,    // kept covariates no longer satisfy the backdoor criterion
};

std::string_view warning_code_name(WarningCode c);
std::optional<WarningCode> parse_warning_code(std::string_view name);

struct ModelWarning {
  WarningCode code = WarningCode::ConfoundingWarning;
  std::string message;

  bool operator==(const ModelWarning&) const = default;
};

struct AdjustmentResult {
  VariableSet confounders;     // backdoor-blocking part
  VariableSet precision;       // parents of dv that only sharpen the estimate
  VariableSet adjustment_set;  // union of the two
  std::vector<AdjustmentDecision> decisions;  // one per non-query node, by name
  std::vector<ModelWarning> warnings;
};

// Requires refinement_complete(g); throws Error{RefinementIncomplete}.
AdjustmentResult select_adjustment_set(const graph::ConceptGraph& g, const dsl::Query& q);

// `g` with every edge leaving `v` removed.
graph::ConceptGraph remove_outgoing(const graph::ConceptGraph& g, std::string_view v);

// Backdoor criterion: no member of z descends from iv, and z d-separates iv
// from dv once iv's outgoing edges are cut.
bool satisfies_backdoor(const graph::ConceptGraph& g, const dsl::Query& q,
                        const VariableSet& z);

// Interaction annotations that mention the dv, with the dv removed, sorted.
// Throws Error{DegenerateInteraction} when fewer than two moderators remain.
std::vector<VariableSet> suggest_interactions(const dsl::ConceptualModel& cm,
                                              const dsl::Query& q);

struct Suggestions {
  AdjustmentResult adjustment;
  std::vector<VariableSet> interactions;
  std::vector<FamilyLink> candidates;
  FamilyLink default_choice;
  bool family_choice_required = false;  // more than one family applies
};

Suggestions suggest(const graph::ConceptGraph& g, const dsl::ConceptualModel& cm,
                    const dsl::Query& q);

// Analyst decisions for the statistical phase. Absent keep-lists mean
// "keep everything suggested".
struct StatisticalChoices {
  std::optional<VariableSet> keep_covariates;
  std::optional<std::vector<VariableSet>> keep_interactions;
  std::optional<FamilyLink> family_link;
};

struct StatisticalModel {
  std::string dv;
  std::string iv;
  VariableSet covariates;                 // main effects besides iv
  std::vector<VariableSet> interactions;  // sorted sets, sorted list
  FamilyLink family_link;
  std::optional<std::string> data_path;
  std::vector<ModelWarning> warnings;

  bool operator==(const StatisticalModel&) const = default;
};

// Throws Error{InvalidFamilyLink | AddedCovariateNotSuggested | MissingFamilyChoice
// | RefinementIncomplete | DegenerateInteraction}.
StatisticalModel assemble_model(const graph::ConceptGraph& g,
                                const dsl::ConceptualModel& cm, const dsl::Query& q,
                                const StatisticalChoices& choices);

// Terms fitted once `*` groups are expanded: main effects plus every product
// of two or more members of each interaction set, members joined with ':'.
std::vector<std::string> expanded_terms(const StatisticalModel& m);

}  // namespace cmc::derivation
