#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cmc {

// Byte range in the program source plus the 1-based position of its start.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 0;
  int column = 0;

  bool operator==(const Span&) const = default;
};

enum class Severity { Error, Warning, Note };

enum class DiagCode {
  // parse_program
  UnexpectedToken,
  UnterminatedString,
  DuplicateDeclaration,
  UnknownKeyword,
  // validate
  UnknownVariable,
  UnknownUnit,
  NotAMeasure,
  ComparisonTypeMismatch,
  ComparisonVariableMismatch,
  UnknownLevel,
  DuplicateLevel,
  InvalidCardinality,
  MissingQuery,
  MultipleQueries,
  QueryWithoutRelationship,
  SelfRelationship,
  DuplicateRelationship,
  InteractionArity,
  DuplicateInteractionVariable,
  // reconcile
  MissingColumn,
  TypeMismatch,
  NegativeCount,
  CardinalityConflict,
  UndeclaredLevels,
  MissingValues,
};

std::string_view diag_code_name(DiagCode code);
std::string_view severity_name(Severity severity);

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagCode code = DiagCode::UnexpectedToken;
  std::string message;
  Span span;

  bool operator==(const Diagnostic&) const = default;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// `path:line:col: severity: message`
std::string format_diagnostic(std::string_view path, const Diagnostic& d);

}  // namespace cmc
