#include <algorithm>
#include <set>

#include "cmc/derivation/derivation.hpp"
#include "cmc/error.hpp"
#include "cmc/graph/algorithms.hpp"

namespace cmc::derivation {

namespace {

VariableSet sorted_unique(VariableSet v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string join(const VariableSet& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

std::vector<VariableSet> suggest_interactions(const dsl::ConceptualModel& cm,
                                              const dsl::Query& q) {
  std::set<VariableSet> out;
  for (const auto& ann : cm.interactions) {
    if (std::find(ann.variables.begin(), ann.variables.end(), q.dv) ==
        ann.variables.end()) {
      continue;
    }
    VariableSet moderators;
    for (const auto& v : ann.variables) {
      if (v != q.dv) moderators.push_back(v);
    }
    if (moderators.size() < 2) {
      throw Error(ErrorCode::DegenerateInteraction,
                  "interacts(" + join(ann.variables, ", ") + ") leaves only " +
                      std::to_string(moderators.size()) + " variable besides " + q.dv +
                      "; an interaction needs at least two (line " +
                      std::to_string(ann.span.line) + ")");
    }
    out.insert(sorted_unique(std::move(moderators)));
  }
  return {out.begin(), out.end()};
}

Suggestions suggest(const graph::ConceptGraph& g, const dsl::ConceptualModel& cm,
                    const dsl::Query& q) {
  Suggestions s;
  s.adjustment = select_adjustment_set(g, q);
  s.interactions = suggest_interactions(cm, q);
  const dsl::VariableDecl* dv = cm.find(q.dv);
  if (!dv || !dv->is_measure()) {
    throw Error(ErrorCode::UnknownNode, "query dv '" + q.dv + "' is not a measure");
  }
  s.candidates = candidate_family_links(dv->mtype);
  s.default_choice = s.candidates.front();
  std::set<Family> families;
  for (const auto& c : s.candidates) families.insert(c.family);
  s.family_choice_required = families.size() > 1;
  return s;
}

StatisticalModel assemble_model(const graph::ConceptGraph& g,
                                const dsl::ConceptualModel& cm, const dsl::Query& q,
                                const StatisticalChoices& choices) {
  Suggestions s = suggest(g, cm, q);

  VariableSet kept = s.adjustment.adjustment_set;
  if (choices.keep_covariates) {
    kept = sorted_unique(*choices.keep_covariates);
    for (const auto& v : kept) {
      if (!std::binary_search(s.adjustment.adjustment_set.begin(),
                              s.adjustment.adjustment_set.end(), v)) {
        throw Error(ErrorCode::AddedCovariateNotSuggested,
                    "'" + v + "' was not suggested as a covariate; only suggested "
                              "covariates can be kept");
      }
    }
  }

  std::vector<VariableSet> interactions = s.interactions;
  if (choices.keep_interactions) {
    std::set<VariableSet> wanted;
    for (const auto& set : *choices.keep_interactions) {
      VariableSet norm = sorted_unique(set);
      if (std::find(s.interactions.begin(), s.interactions.end(), norm) ==
          s.interactions.end()) {
        throw Error(ErrorCode::AddedCovariateNotSuggested,
                    "interaction " + join(norm, "*") +
                        " was not suggested; only suggested interactions can be kept");
      }
      wanted.insert(std::move(norm));
    }
    interactions.assign(wanted.begin(), wanted.end());
  }

  FamilyLink fl = s.default_choice;
  if (choices.family_link) {
    if (std::find(s.candidates.begin(), s.candidates.end(), *choices.family_link) ==
        s.candidates.end()) {
      throw Error(ErrorCode::InvalidFamilyLink,
                  to_string(*choices.family_link) + " is not a candidate for " + q.dv);
    }
    fl = *choices.family_link;
  } else if (s.family_choice_required) {
    throw Error(ErrorCode::MissingFamilyChoice,
                "several families apply to " + q.dv +
                    "; a family and link function must be chosen");
  }

  StatisticalModel m;
  m.dv = q.dv;
  m.iv = q.iv;
  VariableSet covariates = kept;
  for (const auto& set : interactions) {
    for (const auto& v : set) {
      if (v != q.iv) covariates.push_back(v);
    }
  }
  m.covariates = sorted_unique(std::move(covariates));
  m.interactions = interactions;
  m.family_link = fl;
  m.warnings = s.adjustment.warnings;

  bool unblockable = std::any_of(m.warnings.begin(), m.warnings.end(), [](auto& w) {
    return w.code == WarningCode::UnblockableBackdoor;
  });
  if (!unblockable && !satisfies_backdoor(g, q, m.covariates)) {
    VariableSet dropped;
    std::set_difference(s.adjustment.confounders.begin(),
                        s.adjustment.confounders.end(), m.covariates.begin(),
                        m.covariates.end(), std::back_inserter(dropped));
    auto de_iv = graph::reachable(g, q.iv, graph::Direction::Forward);
    VariableSet post;
    std::set_intersection(m.covariates.begin(), m.covariates.end(), de_iv.begin(),
                          de_iv.end(), std::back_inserter(post));
    std::string msg = "the model's covariates no longer block every backdoor path from " +
                      q.iv + " to " + q.dv;
    if (!dropped.empty()) msg += "; removed confounders: " + join(dropped, ", ");
    if (!post.empty()) msg += "; covariates affected by " + q.iv + ": " + join(post, ", ");
    m.warnings.push_back({WarningCode::ConfoundingWarning, msg});
  }
  return m;
}

std::vector<std::string> expanded_terms(const StatisticalModel& m) {
  std::set<std::string> terms{m.iv};
  terms.insert(m.covariates.begin(), m.covariates.end());
  for (const auto& set : m.interactions) {
    const std::size_t k = set.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      VariableSet picked;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask & (std::size_t{1} << i)) picked.push_back(set[i]);
      }
      terms.insert(join(picked, ":"));
    }
  }
  return {terms.begin(), terms.end()};
}

}  // namespace cmc::derivation
