#include "cmc/codegen/codegen.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cmc/error.hpp"
#include "json.hpp"

namespace cmc::codegen {

using derivation::Family;
using derivation::Link;
using derivation::StatisticalModel;

std::string_view r_family(Family f) {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::InverseGaussian: return "inverse.gaussian";
    case Family::Gamma: return "Gamma";
    case Family::Poisson: return "poisson";
    case Family::NegativeBinomial: return "negative.binomial";
    case Family::Binomial: return "binomial";
    case Family::Multinomial: return "multinomial";
  }
  return "gaussian";
}

std::string_view r_link(Link l) {
  switch (l) {
    case Link::Identity: return "identity";
    case Link::Log: return "log";
    case Link::Inverse: return "inverse";
    case Link::InverseSquared: return "1/mu^2";
    case Link::Sqrt: return "sqrt";
    case Link::Logit: return "logit";
    case Link::Probit: return "probit";
    case Link::Cauchit: return "cauchit";
    case Link::CLogLog: return "cloglog";
  }
  return "identity";
}

std::string emit_formula(const StatisticalModel& m) {
  std::set<std::string> grouped;
  for (const auto& set : m.interactions) grouped.insert(set.begin(), set.end());

  std::vector<std::string> terms;
  if (!grouped.count(m.iv)) terms.push_back(m.iv);
  for (const auto& c : m.covariates) {
    if (!grouped.count(c)) terms.push_back(c);
  }
  for (const auto& set : m.interactions) {
    std::string group;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (i) group += '*';
      group += set[i];
    }
    terms.push_back(std::move(group));
  }
  std::string out = m.dv + " ~ ";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    out += terms[i];
  }
  return out;
}

std::string emit_model_call(const StatisticalModel& m) {
  const std::string formula = emit_formula(m);
  const auto& fl = m.family_link;
  switch (fl.family) {
    case Family::NegativeBinomial:
      return "MASS::glm.nb(formula=" + formula + ", link='" +
             std::string(r_link(fl.link)) + "', data=data)";
    case Family::Multinomial:
      return "nnet::multinom(formula=" + formula + ", data=data)";
    default:
      return "glm(formula=" + formula + ", family=" + std::string(r_family(fl.family)) +
             "(link='" + std::string(r_link(fl.link)) + "'), data=data)";
  }
}

namespace {

std::string r_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out + "\"";
}

// Comment lines must not smuggle a newline into code.
std::string one_line(const std::string& s) {
  std::string out = s;
  std::replace(out.begin(), out.end(), '\n', ' ');
  std::replace(out.begin(), out.end(), '\r', ' ');
  return out;
}

void comment_section(std::ostringstream& out, const char* title,
                     const std::vector<std::string>& lines) {
  if (lines.empty()) return;
  out << "#\n# " << title << ":\n";
  for (const auto& l : lines) out << "#   " << one_line(l) << '\n';
}

}  // namespace

std::string emit_script(const StatisticalModel& m, const CodegenConfig& cfg) {
  std::string data_path = cfg.data_path;
  if (data_path.empty() && m.data_path) data_path = *m.data_path;
  if (data_path.empty()) {
    throw Error(ErrorCode::MissingDataPath,
                "no data file given; the script needs a path to load the data from");
  }

  std::ostringstream out;
  out << "# Model-fitting script generated by " << kToolName << ' ' << kToolVersion
      << ".\n";
  out << "# Query: average causal effect of " << m.iv << " on " << m.dv << ".\n";
  out << "# Family: " << derivation::family_name(m.family_link.family)
      << ", link: " << derivation::link_name(m.family_link.link) << ".\n";
  comment_section(out, "Conceptual model", cfg.assumptions);
  comment_section(out, "Covariate decisions", cfg.decisions);
  std::vector<std::string> warnings;
  for (const auto& w : m.warnings) {
    warnings.push_back(std::string(derivation::warning_code_name(w.code)) + ": " +
                       w.message);
  }
  comment_section(out, "Warnings", warnings);
  comment_section(out, "Data notes", cfg.data_notes);
  out << '\n';

  out << "data <- read.csv(" << r_string(data_path) << ")\n\n";

  switch (m.family_link.family) {
    case Family::NegativeBinomial:
      out << "# glm() has no negative binomial family; MASS::glm.nb() estimates the\n"
             "# dispersion parameter alongside the coefficients.\n";
      break;
    case Family::Multinomial:
      out << "# WARNING: glm() cannot fit a multinomial family. This model uses the\n"
             "# alternative routine nnet::multinom() (multinomial logit); install the\n"
             "# nnet package if it is missing. Its summary() reports one set of\n"
             "# coefficients per non-reference category.\n";
      break;
    default:
      break;
  }
  out << "m <- " << emit_model_call(m) << '\n';
  out << "print(summary(m))\n\n";

  out << "# Check the family and link function by plotting residuals against fitted\n"
         "# values. Points should scatter evenly around the dashed zero line with no\n"
         "# pattern. A curved trend suggests a different link function; a spread that\n"
         "# widens or narrows with the fitted values suggests a different family.\n"
         "# Further reading: help('plot.lm') and\n"
         "# https://cran.r-project.org/doc/manuals/r-release/R-intro.html\n";
  if (m.family_link.family == Family::Multinomial) {
    out << "# For a multinomial fit there is one column of residuals per category.\n";
    out << "matplot(fitted(m), residuals(m), pch=1, xlab='Fitted values', "
           "ylab='Residuals', main='Residuals vs fitted')\n";
  } else {
    out << "plot(fitted(m), residuals(m), xlab='Fitted values', ylab='Residuals', "
           "main='Residuals vs fitted')\n";
  }
  out << "abline(h=0, lty=2)\n";
  return out.str();
}

std::string emit_model_json(const StatisticalModel& m) {
  nlohmann::json j;
  j["dv"] = m.dv;
  j["iv"] = m.iv;
  j["covariates"] = m.covariates;
  j["interactions"] = m.interactions;
  j["family"] = derivation::family_name(m.family_link.family);
  j["link"] = derivation::link_name(m.family_link.link);
  j["formula"] = emit_formula(m);
  j["terms"] = derivation::expanded_terms(m);
  if (m.data_path) j["data_path"] = *m.data_path;
  j["warnings"] = nlohmann::json::array();
  for (const auto& w : m.warnings) {
    j["warnings"].push_back(
        {{"code", derivation::warning_code_name(w.code)}, {"message", w.message}});
  }
  return j.dump(2) + "\n";
}

StatisticalModel parse_model_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    StatisticalModel m;
    m.dv = j.at("dv").get<std::string>();
    m.iv = j.at("iv").get<std::string>();
    m.covariates = j.at("covariates").get<std::vector<std::string>>();
    m.interactions = j.at("interactions").get<std::vector<std::vector<std::string>>>();
    auto fam = derivation::parse_family(j.at("family").get<std::string>());
    auto link = derivation::parse_link(j.at("link").get<std::string>());
    if (!fam || !link) {
      throw Error(ErrorCode::MalformedModelJson, "unknown family or link");
    }
    m.family_link = {*fam, *link};
    if (j.contains("data_path")) m.data_path = j["data_path"].get<std::string>();
    for (const auto& w : j.at("warnings")) {
      auto code = derivation::parse_warning_code(w.at("code").get<std::string>());
      if (!code) throw Error(ErrorCode::MalformedModelJson, "unknown warning code");
      m.warnings.push_back({*code, w.at("message").get<std::string>()});
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModelJson,
                std::string("invalid model JSON: ") + e.what());
  }
}

}  // namespace cmc::codegen
