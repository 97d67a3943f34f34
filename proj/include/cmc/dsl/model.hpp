#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/diagnostics.hpp"
#include "cmc/dsl/ast.hpp"

namespace cmc::dsl {

enum class MeasureKind { Continuous, Counts, OrderedCategories, UnorderedCategories };

std::string_view measure_kind_name(MeasureKind kind);

struct MeasureType {
  MeasureKind kind = MeasureKind::Continuous;
  std::vector<std::string> levels;  // categorical kinds only; order significant if ordered
  bool is_condition = false;

  bool categorical() const {
    return kind == MeasureKind::OrderedCategories ||
           kind == MeasureKind::UnorderedCategories;
  }
  bool operator==(const MeasureType&) const = default;
};

enum class VariableKind { Unit, Measure };

struct VariableDecl {
  std::string name;
  VariableKind kind = VariableKind::Measure;
  std::string owner;                     // Measure only
  MeasureType mtype;                     // Measure only
  std::optional<long long> cardinality;
  std::optional<std::string> id_column;  // Unit only
  Span span;

  bool is_measure() const { return kind == VariableKind::Measure; }
  bool operator==(const VariableDecl&) const = default;
};

struct Comparison {
  std::string variable;
  CompareOp op = CompareOp::Increases;
  std::optional<std::string> value;

  bool operator==(const Comparison&) const = default;
};

struct Relationship {
  RelationShape shape = RelationShape::Causes;
  std::string first;   // cause for Causes
  std::string second;  // effect for Causes
  Certainty certainty = Certainty::Assume;
  std::optional<Comparison> when;
  std::optional<Comparison> then;
  Span span;

  bool operator==(const Relationship&) const = default;
};

struct InteractionAnnotation {
  std::vector<std::string> variables;  // source order, no duplicates
  Span span;

  bool operator==(const InteractionAnnotation&) const = default;
};

struct ConceptualModel {
  std::vector<VariableDecl> variables;
  std::vector<Relationship> relationships;
  std::vector<InteractionAnnotation> interactions;

  const VariableDecl* find(std::string_view name) const;
  VariableDecl* find(std::string_view name);
  // Declared measures, lexicographically sorted.
  std::vector<std::string> measure_names() const;

  bool operator==(const ConceptualModel&) const = default;
};

struct Query {
  std::string iv;
  std::string dv;
  Span span;

  bool operator==(const Query&) const = default;
};

struct ValidatedProgram {
  ConceptualModel model;
  Query query;
};

struct ValidationResult {
  std::optional<ValidatedProgram> program;  // empty iff an error was reported
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

ValidationResult validate(const Program& program);

// Human-readable rendering used in script headers and rationales,
// e.g. `assume causes(Age, Income), when = Age increases`.
std::string describe(const Relationship& rel);

}  // namespace cmc::dsl
