#include "cmc/pipeline/pipeline.hpp"

#include <algorithm>
#include <cstdlib>

#include "cmc/data/data.hpp"
#include "cmc/dsl/parser.hpp"
#include "cmc/error.hpp"

namespace cmc::pipeline {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& msg) {
  throw Error(ErrorCode::MalformedAnswerLog, msg);
}

std::vector<std::string> string_list(const json& j, const char* field) {
  if (!j.is_array()) malformed(std::string("'") + field + "' must be an array of names");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) malformed(std::string("'") + field + "' must be an array of names");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

derivation::StatisticalChoices parse_statistical_choices(const json& j) {
  if (!j.is_object()) malformed("statistical choices must be a JSON object");
  derivation::StatisticalChoices c;
  if (j.contains("keep_covariates") && !j["keep_covariates"].is_null()) {
    c.keep_covariates = string_list(j["keep_covariates"], "keep_covariates");
  }
  if (j.contains("keep_interactions") && !j["keep_interactions"].is_null()) {
    const auto& arr = j["keep_interactions"];
    if (!arr.is_array()) malformed("'keep_interactions' must be an array of arrays");
    c.keep_interactions.emplace();
    for (const auto& set : arr) {
      c.keep_interactions->push_back(string_list(set, "keep_interactions"));
    }
  }
  const bool has_family = j.contains("family") && !j["family"].is_null();
  const bool has_link = j.contains("link") && !j["link"].is_null();
  if (has_link && !has_family) malformed("'link' given without 'family'");
  if (has_family) {
    if (!j["family"].is_string() || (has_link && !j["link"].is_string())) {
      malformed("'family' and 'link' must be strings");
    }
    auto family = derivation::parse_family(j["family"].get<std::string>());
    if (!family) {
      throw Error(ErrorCode::InvalidFamilyLink,
                  "unknown family '" + j["family"].get<std::string>() + "'");
    }
    derivation::Link link = derivation::links_for(*family).front();
    if (has_link) {
      auto parsed = derivation::parse_link(j["link"].get<std::string>());
      if (!parsed) {
        throw Error(ErrorCode::InvalidFamilyLink,
                    "unknown link '" + j["link"].get<std::string>() + "'");
      }
      const auto allowed = derivation::links_for(*family);
      if (std::find(allowed.begin(), allowed.end(), *parsed) == allowed.end()) {
        throw Error(ErrorCode::InvalidFamilyLink,
                    "link '" + j["link"].get<std::string>() + "' is not available for family '" +
                        j["family"].get<std::string>() + "'");
      }
      link = *parsed;
    }
    c.family_link = derivation::FamilyLink{*family, link};
  }
  return c;
}

json statistical_choices_json(const derivation::StatisticalChoices& c) {
  json j = json::object();
  if (c.keep_covariates) j["keep_covariates"] = *c.keep_covariates;
  if (c.keep_interactions) j["keep_interactions"] = *c.keep_interactions;
  if (c.family_link) {
    j["family"] = derivation::family_name(c.family_link->family);
    j["link"] = derivation::link_name(c.family_link->link);
  }
  return j;
}

AnswerLog parse_answer_log(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("answer log is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) malformed("answer log must be a JSON array");

  AnswerLog log;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& entry = j[i];
    const std::string where = "answer log entry " + std::to_string(i + 1);
    if (!entry.is_object() || !entry.contains("phase") || !entry["phase"].is_string()) {
      malformed(where + " needs a 'phase'");
    }
    const std::string phase = entry["phase"].get<std::string>();
    if (log.statistical) malformed(where + " follows the statistical entry");
    if (phase == "conceptual") {
      if (!entry.contains("ambiguity_id") || !entry["ambiguity_id"].is_string() ||
          !entry.contains("choice") || !is_choice_index(entry["choice"])) {
        malformed(where + " needs a string 'ambiguity_id' and a non-negative 'choice'");
      }
      ConceptualAnswer a;
      a.resolution.ambiguity_id = entry["ambiguity_id"].get<std::string>();
      a.resolution.choice = entry["choice"].get<std::size_t>();
      if (entry.contains("summary") && entry["summary"].is_string()) {
        a.summary = entry["summary"].get<std::string>();
      }
      log.conceptual.push_back(std::move(a));
    } else if (phase == "statistical") {
      log.statistical = parse_statistical_choices(entry);
    } else {
      malformed(where + " has unknown phase '" + phase + "'");
    }
  }
  return log;
}

json answer_log_json(const AnswerLog& log) {
  json out = json::array();
  for (const auto& a : log.conceptual) {
    json e = {{"phase", "conceptual"},
              {"ambiguity_id", a.resolution.ambiguity_id},
              {"choice", a.resolution.choice}};
    if (!a.summary.empty()) e["summary"] = a.summary;
    out.push_back(std::move(e));
  }
  if (log.statistical) {
    json e = statistical_choices_json(*log.statistical);
    e["phase"] = "statistical";
    out.push_back(std::move(e));
  }
  return out;
}

std::string serialize_answer_log(const AnswerLog& log) {
  return answer_log_json(log).dump(2) + "\n";
}

FrontEndResult load_program(std::string_view source,
                            const std::optional<std::string>& data_path) {
  FrontEndResult result;
  auto parsed = dsl::parse_program(source);
  result.diagnostics = parsed.diagnostics;
  if (!parsed.ok()) return result;

  auto validated = dsl::validate(*parsed.program);
  result.diagnostics.insert(result.diagnostics.end(), validated.diagnostics.begin(),
                            validated.diagnostics.end());
  if (!validated.ok()) return result;

  dsl::ValidatedProgram program = std::move(*validated.program);
  std::vector<std::string> notes;
  if (data_path) {
    auto reconciled = data::reconcile(program.model, data::profile_csv(*data_path));
    result.diagnostics.insert(result.diagnostics.end(), reconciled.diagnostics.begin(),
                              reconciled.diagnostics.end());
    if (!reconciled.ok()) return result;
    program.model = std::move(*reconciled.model);
    notes = std::move(reconciled.data_notes);
  }
  graph::ConceptGraph g = graph::build_graph(program.model);
  result.front = FrontEnd{std::move(program), std::move(g), std::move(notes)};
  return result;
}

Refinement::Refinement(graph::ConceptGraph initial, graph::CycleSearchOptions options)
    : graph_(std::move(initial)),
      options_(options),
      pending_(disambiguation::enumerate_ambiguities(graph_, options_)) {}

const ConceptualAnswer& Refinement::apply(const disambiguation::Resolution& r) {
  auto applied = disambiguation::apply_resolution(graph_, r, options_);
  auto next = disambiguation::enumerate_ambiguities(applied.graph, options_);
  graph_ = std::move(applied.graph);
  pending_ = std::move(next);
  answers_.push_back({r, std::move(applied.summary)});
  return answers_.back();
}

Finalized finalize(const FrontEnd& front, const graph::ConceptGraph& refined,
                   const std::vector<ConceptualAnswer>& answers,
                   const derivation::StatisticalChoices& choices,
                   const std::optional<std::string>& script_data_path) {
  const auto& cm = front.program.model;
  const auto& q = front.program.query;
  Finalized out;
  out.model = derivation::assemble_model(refined, cm, q, choices);
  out.model.data_path = script_data_path;

  const auto suggestions = derivation::suggest(refined, cm, q);
  derivation::VariableSet kept =
      choices.keep_covariates.value_or(suggestions.adjustment.adjustment_set);
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  out.normalized.keep_covariates = std::move(kept);
  out.normalized.keep_interactions = out.model.interactions;
  out.normalized.family_link = out.model.family_link;

  codegen::CodegenConfig cfg;
  cfg.data_path = script_data_path.value_or("");
  for (const auto& rel : cm.relationships) cfg.assumptions.push_back(dsl::describe(rel));
  for (const auto& a : answers) {
    if (!a.summary.empty()) cfg.assumptions.push_back("refinement: " + a.summary);
  }
  for (const auto& d : suggestions.adjustment.decisions) {
    cfg.decisions.push_back(d.variable + " (" + std::string(derivation::verdict_name(d.verdict)) +
                            "): " + d.rationale);
  }
  cfg.data_notes = front.data_notes;

  out.artifact.script_text = codegen::emit_script(out.model, cfg);
  out.artifact.model_json = codegen::emit_model_json(out.model);
  out.artifact.choices_log = serialize_answer_log(AnswerLog{answers, out.normalized});
  return out;
}

json to_json(const derivation::ModelWarning& w) {
  return {{"code", derivation::warning_code_name(w.code)}, {"message", w.message}};
}

json to_json(const Diagnostic& d) {
  return {{"severity", severity_name(d.severity)},
          {"code", diag_code_name(d.code)},
          {"message", d.message},
          {"line", d.span.line},
          {"column", d.span.column}};
}

json to_json(const derivation::Suggestions& s) {
  json decisions = json::array();
  for (const auto& d : s.adjustment.decisions) {
    decisions.push_back({{"variable", d.variable},
                         {"verdict", derivation::verdict_name(d.verdict)},
                         {"included", derivation::is_included(d.verdict)},
                         {"rationale", d.rationale}});
  }
  json candidates = json::array();
  for (const auto& c : s.candidates) {
    candidates.push_back({{"family", derivation::family_name(c.family)},
                          {"link", derivation::link_name(c.link)}});
  }
  json warnings = json::array();
  for (const auto& w : s.adjustment.warnings) warnings.push_back(to_json(w));
  return {{"confounders", s.adjustment.confounders},
          {"precision", s.adjustment.precision},
          {"suggested_covariates", s.adjustment.adjustment_set},
          {"decisions", std::move(decisions)},
          {"suggested_interactions", s.interactions},
          {"family_candidates", std::move(candidates)},
          {"default_choice",
           {{"family", derivation::family_name(s.default_choice.family)},
            {"link", derivation::link_name(s.default_choice.link)}}},
          {"family_choice_required", s.family_choice_required},
          {"warnings", std::move(warnings)}};
}

graph::CycleSearchOptions cycle_options_from_env() {
  graph::CycleSearchOptions options;
  const char* raw = std::getenv("CMC_MAX_GRAPH_NODES");
  if (!raw || !*raw) return options;
  char* end = nullptr;
  const long long value = std::strtoll(raw, &end, 10);
  if (*end != '\0' || value < 1) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("CMC_MAX_GRAPH_NODES must be a positive integer, got '") + raw +
                    "'");
  }
  options.max_nodes = static_cast<std::size_t>(value);
  return options;
}

}  // namespace cmc::pipeline
