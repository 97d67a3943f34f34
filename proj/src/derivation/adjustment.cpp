#include <algorithm>
#include <deque>
#include <set>

#include "cmc/derivation/derivation.hpp"
#include "cmc/disambiguation/ambiguity.hpp"
#include "cmc/error.hpp"
#include "cmc/graph/algorithms.hpp"

namespace cmc::derivation {

using graph::ConceptGraph;
using graph::Direction;

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::IncludeConfounder: return "include_confounder";
    case Verdict::IncludePrecision: return "include_precision";
    case Verdict::ExcludeMediator: return "exclude_mediator";
    case Verdict::ExcludeColliderPath: return "exclude_collider_path";
    case Verdict::ExcludeDescendantOfDV: return "exclude_descendant_of_dv";
    case Verdict::ExcludeUnrelated: return "exclude_unrelated";
  }
  return "exclude_unrelated";
}

bool is_included(Verdict v) {
  return v == Verdict::IncludeConfounder || v == Verdict::IncludePrecision;
}

std::string_view warning_code_name(WarningCode c) {
  switch (c) {
    case WarningCode::QueryUnreachable: return "QueryUnreachable";
    case WarningCode::UnblockableBackdoor: return "UnblockableBackdoor";
    case WarningCode::ConfoundingWarning: return "ConfoundingWarning";
  }
  return "ConfoundingWarning";
}

std::optional<WarningCode> parse_warning_code(std::string_view name) {
  for (auto c : {WarningCode::QueryUnreachable, WarningCode::UnblockableBackdoor,
                 WarningCode::ConfoundingWarning}) {
    if (warning_code_name(c) == name) return c;
  }
  return std::nullopt;
}

ConceptGraph remove_outgoing(const ConceptGraph& g, std::string_view v) {
  std::vector<graph::DirectedEdge> edges;
  for (const auto& e : g.edges()) {
    if (e.from != v) edges.push_back(e);
  }
  return ConceptGraph(g.nodes(), std::move(edges), g.revision());
}

bool satisfies_backdoor(const ConceptGraph& g, const dsl::Query& q, const VariableSet& z) {
  auto de_iv = graph::reachable(g, q.iv, Direction::Forward);
  for (const auto& v : z) {
    if (v == q.iv || v == q.dv) return false;
    if (std::binary_search(de_iv.begin(), de_iv.end(), v)) return false;
  }
  return graph::d_separated(remove_outgoing(g, q.iv), q.iv, q.dv, z);
}

namespace {

bool contains(const std::vector<std::string>& sorted, const std::string& v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

std::vector<std::vector<std::size_t>> skeleton(const ConceptGraph& g) {
  std::vector<std::set<std::size_t>> nb(g.size());
  for (const auto& e : g.edges()) {
    std::size_t a = g.index_of(e.from), b = g.index_of(e.to);
    nb[a].insert(b);
    nb[b].insert(a);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& s : nb) out.emplace_back(s.begin(), s.end());
  return out;
}

// True when some simple path between s and t in the undirected graph `nb`
// passes through v. Equivalent to two vertex-disjoint paths v~s and v~t,
// found as a unit-capacity flow of value 2 with split vertices.
bool on_simple_path(const std::vector<std::vector<std::size_t>>& nb, std::size_t s,
                    std::size_t t, std::size_t v) {
  const std::size_t n = nb.size();
  const std::size_t sink = 2 * n;
  const std::size_t size = 2 * n + 1;
  auto in = [](std::size_t u) { return 2 * u; };
  auto out = [](std::size_t u) { return 2 * u + 1; };
  std::vector<std::vector<int>> cap(size, std::vector<int>(size, 0));
  for (std::size_t u = 0; u < n; ++u) {
    if (u != v) cap[in(u)][out(u)] = 1;
    for (std::size_t w : nb[u]) cap[out(u)][in(w)] = 1;
  }
  cap[out(s)][sink] = 1;
  cap[out(t)][sink] = 1;

  int flow = 0;
  while (flow < 2) {
    std::vector<std::size_t> prev(size, size);
    std::deque<std::size_t> queue{out(v)};
    prev[out(v)] = out(v);
    while (!queue.empty() && prev[sink] == size) {
      std::size_t a = queue.front();
      queue.pop_front();
      for (std::size_t b = 0; b < size; ++b) {
        if (cap[a][b] > 0 && prev[b] == size) {
          prev[b] = a;
          queue.push_back(b);
        }
      }
    }
    if (prev[sink] == size) break;
    for (std::size_t b = sink; b != out(v); b = prev[b]) {
      --cap[prev[b]][b];
      ++cap[b][prev[b]];
    }
    ++flow;
  }
  return flow == 2;
}

// Connected in the skeleton without passing through `avoid`.
bool connected_avoiding(const std::vector<std::vector<std::size_t>>& nb, std::size_t a,
                        std::size_t b, std::size_t avoid) {
  if (a == b) return true;
  std::vector<bool> seen(nb.size(), false);
  seen[avoid] = true;
  seen[a] = true;
  std::vector<std::size_t> stack{a};
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t w : nb[u]) {
      if (w == b) return true;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

// Some node c in {v} ∪ An(v) has two parents, one linked to iv and the other
// to dv without going through c: conditioning on v opens the path at c.
bool opens_collider(const ConceptGraph& g,
                    const std::vector<std::vector<std::size_t>>& nb,
                    const dsl::Query& q, const std::string& v) {
  std::vector<std::string> candidates = graph::reachable(g, v, Direction::Backward);
  candidates.push_back(v);
  std::size_t iv = g.index_of(q.iv), dv = g.index_of(q.dv);
  for (const auto& c : candidates) {
    std::size_t ci = g.index_of(c);
    if (ci == iv || ci == dv) continue;
    std::vector<std::size_t> parents;
    for (const auto& e : g.edges()) {
      if (e.to == c) parents.push_back(g.index_of(e.from));
    }
    for (std::size_t a : parents) {
      for (std::size_t b : parents) {
        if (a != b && connected_avoiding(nb, a, iv, ci) &&
            connected_avoiding(nb, b, dv, ci)) {
          return true;
        }
      }
    }
  }
  return false;
}

std::vector<std::string> parents_of(const ConceptGraph& g, const std::string& v) {
  std::set<std::string> out;
  for (const auto& e : g.edges()) {
    if (e.to == v) out.insert(e.from);
  }
  return {out.begin(), out.end()};
}

}  // namespace

AdjustmentResult select_adjustment_set(const ConceptGraph& g, const dsl::Query& q) {
  if (!disambiguation::refinement_complete(g)) {
    throw Error(ErrorCode::RefinementIncomplete,
                "the conceptual model still has unresolved relationships or cycles");
  }
  g.index_of(q.iv);
  g.index_of(q.dv);

  const auto de_iv = graph::reachable(g, q.iv, Direction::Forward);
  const auto de_dv = graph::reachable(g, q.dv, Direction::Forward);
  const auto an_iv = graph::reachable(g, q.iv, Direction::Backward);
  const auto an_dv = graph::reachable(g, q.dv, Direction::Backward);
  const ConceptGraph cut = remove_outgoing(g, q.iv);
  const auto cut_skeleton = skeleton(cut);
  const auto full_skeleton = skeleton(g);
  const std::size_t iv_idx = g.index_of(q.iv), dv_idx = g.index_of(q.dv);

  AdjustmentResult result;
  for (const auto& v : g.nodes()) {
    if (v == q.iv || v == q.dv || contains(de_iv, v)) continue;
    if (!contains(an_iv, v) && !contains(an_dv, v)) continue;
    if (on_simple_path(cut_skeleton, iv_idx, dv_idx, g.index_of(v))) {
      result.confounders.push_back(v);
    }
  }
  for (const auto& p : parents_of(g, q.dv)) {
    if (p == q.iv || contains(de_iv, p) || contains(result.confounders, p)) continue;
    if (graph::d_separated(g, q.iv, p, result.confounders)) {
      result.precision.push_back(p);
    }
  }
  std::set_union(result.confounders.begin(), result.confounders.end(),
                 result.precision.begin(), result.precision.end(),
                 std::back_inserter(result.adjustment_set));

  for (const auto& v : g.nodes()) {
    if (v == q.iv || v == q.dv) continue;
    AdjustmentDecision d{v, Verdict::ExcludeUnrelated, ""};
    if (contains(result.confounders, v)) {
      d.verdict = Verdict::IncludeConfounder;
      d.rationale = contains(an_iv, v)
                        ? v + " influences both " + q.iv + " and " + q.dv +
                              " through a backdoor path; controlling for it removes "
                              "confounding."
                        : v + " lies on a backdoor path from " + q.iv + " to " + q.dv +
                              "; controlling for it blocks that path.";
    } else if (contains(result.precision, v)) {
      d.verdict = Verdict::IncludePrecision;
      d.rationale = v + " causes " + q.dv + " but is not connected to " + q.iv +
                    "; including it improves the precision of the estimate without "
                    "introducing bias.";
    } else if (contains(de_iv, v) && contains(an_dv, v)) {
      d.verdict = Verdict::ExcludeMediator;
      d.rationale = v + " is on a causal path from " + q.iv + " to " + q.dv +
                    "; controlling for it would remove part of the effect being "
                    "estimated.";
    } else if (contains(de_dv, v)) {
      d.verdict = Verdict::ExcludeDescendantOfDV;
      d.rationale = v + " is an outcome of " + q.dv +
                    "; controlling for it would bias the estimate.";
    } else if (opens_collider(g, full_skeleton, q, v)) {
      d.verdict = Verdict::ExcludeColliderPath;
      d.rationale = v + " is (or descends from) a common effect on a path between " +
                    q.iv + " and " + q.dv +
                    "; controlling for it would open that path and introduce bias.";
    } else if (contains(de_iv, v)) {
      d.rationale = v + " is an effect of " + q.iv + " that does not lead to " + q.dv +
                    "; it does not belong in the model.";
    } else {
      d.rationale = v + " is not on any path that affects the estimate of " + q.iv +
                    " on " + q.dv + ".";
    }
    result.decisions.push_back(std::move(d));
  }

  if (!contains(de_iv, q.dv)) {
    result.warnings.push_back(
        {WarningCode::QueryUnreachable,
         "the conceptual model has no causal path from " + q.iv + " to " + q.dv +
             "; the estimated effect is expected to be zero"});
  }
  if (contains(parents_of(g, q.iv), q.dv)) {
    result.warnings.push_back(
        {WarningCode::UnblockableBackdoor,
         q.dv + " directly causes " + q.iv +
             "; no set of covariates can remove this confounding"});
  }
  return result;
}

}  // namespace cmc::derivation
