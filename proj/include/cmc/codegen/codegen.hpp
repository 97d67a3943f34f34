#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cmc/derivation/derivation.hpp"

namespace cmc::codegen {

inline constexpr std::string_view kToolName = "cmc";
inline constexpr std::string_view kToolVersion = "0.1.0";

struct CodegenConfig {
  std::string data_path;                  // falls back to the model's data_path
  std::vector<std::string> assumptions;   // relationship lines, echoed as comments
  std::vector<std::string> decisions;     // covariate rationale lines
  std::vector<std::string> data_notes;    // e.g. missing value counts
};

struct EmittedArtifact {
  std::string script_text;
  std::string model_json;
  std::string choices_log;

  bool operator==(const EmittedArtifact&) const = default;
};

// `DV ~ IV + covariates + A*B ...`; a main effect is printed on its own only
// when no `*` group already contains it.
std::string emit_formula(const derivation::StatisticalModel& m);

// The fitting call, e.g. `glm(formula=Y ~ X, family=gaussian(link='identity'), data=data)`.
std::string emit_model_call(const derivation::StatisticalModel& m);

// R script; byte-identical for identical inputs. Throws Error{MissingDataPath}.
std::string emit_script(const derivation::StatisticalModel& m, const CodegenConfig& cfg);

// Canonical JSON with sorted keys.
std::string emit_model_json(const derivation::StatisticalModel& m);
// Throws Error{MalformedModelJson}.
derivation::StatisticalModel parse_model_json(std::string_view text);

std::string_view r_family(derivation::Family f);
std::string_view r_link(derivation::Link l);

}  // namespace cmc::codegen
