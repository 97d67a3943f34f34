#include "cmc/diagnostics.hpp"

#include <algorithm>

#include "cmc/error.hpp"

namespace cmc {

std::string_view diag_code_name(DiagCode code) {
  switch (code) {
    case DiagCode::UnexpectedToken: return "UnexpectedToken";
    case DiagCode::UnterminatedString: return "UnterminatedString";
    case DiagCode::DuplicateDeclaration: return "DuplicateDeclaration";
    case DiagCode::UnknownKeyword: return "UnknownKeyword";
    case DiagCode::UnknownVariable: return "UnknownVariable";
    case DiagCode::UnknownUnit: return "UnknownUnit";
    case DiagCode::NotAMeasure: return "NotAMeasure";
    case DiagCode::ComparisonTypeMismatch: return "ComparisonTypeMismatch";
    case DiagCode::ComparisonVariableMismatch: return "ComparisonVariableMismatch";
    case DiagCode::UnknownLevel: return "UnknownLevel";
    case DiagCode::DuplicateLevel: return "DuplicateLevel";
    case DiagCode::InvalidCardinality: return "InvalidCardinality";
    case DiagCode::MissingQuery: return "MissingQuery";
    case DiagCode::MultipleQueries: return "MultipleQueries";
    case DiagCode::QueryWithoutRelationship: return "QueryWithoutRelationship";
    case DiagCode::SelfRelationship: return "SelfRelationship";
    case DiagCode::DuplicateRelationship: return "DuplicateRelationship";
    case DiagCode::InteractionArity: return "InteractionArity";
    case DiagCode::DuplicateInteractionVariable: return "DuplicateInteractionVariable";
    case DiagCode::MissingColumn: return "MissingColumn";
    case DiagCode::TypeMismatch: return "TypeMismatch";
    case DiagCode::NegativeCount: return "NegativeCount";
    case DiagCode::CardinalityConflict: return "CardinalityConflict";
    case DiagCode::UndeclaredLevels: return "UndeclaredLevels";
    case DiagCode::MissingValues: return "MissingValues";
  }
  return "Unknown";
}

std::string_view severity_name(Severity severity) {
  switch (severity) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
  }
  return "error";
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(std::string_view path, const Diagnostic& d) {
  std::string out(path);
  out += ':' + std::to_string(d.span.line) + ':' + std::to_string(d.span.column) + ": ";
  out += severity_name(d.severity);
  out += ": ";
  out += d.message;
  out += " [";
  out += diag_code_name(d.code);
  out += ']';
  return out;
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    case ErrorCode::GraphNotAcyclic: return "GraphNotAcyclic";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::StaleAmbiguity: return "StaleAmbiguity";
    case ErrorCode::UnknownAmbiguity: return "UnknownAmbiguity";
    case ErrorCode::ChoiceOutOfRange: return "ChoiceOutOfRange";
    case ErrorCode::RefinementIncomplete: return "RefinementIncomplete";
    case ErrorCode::DegenerateInteraction: return "DegenerateInteraction";
    case ErrorCode::InvalidFamilyLink: return "InvalidFamilyLink";
    case ErrorCode::AddedCovariateNotSuggested: return "AddedCovariateNotSuggested";
    case ErrorCode::MissingFamilyChoice: return "MissingFamilyChoice";
    case ErrorCode::MissingDataPath: return "MissingDataPath";
    case ErrorCode::MalformedModelJson: return "MalformedModelJson";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MalformedAnswerLog: return "MalformedAnswerLog";
  }
  return "Unknown";
}

}  // namespace cmc
