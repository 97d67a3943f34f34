#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cmc/diagnostics.hpp"

namespace cmc::dsl {

enum class Certainty { Assume, Hypothesize };
enum class RelationShape { Causes, Relates };
enum class CompareOp { Increases, Decreases, Equals, NotEquals };

struct Ident {
  std::string name;
  Span span;
};

struct IntLit {
  long long value = 0;
  Span span;
};

struct StringLit {
  std::string value;  // unescaped
  Span span;
};

// Right-hand side of `==` / `!=` in a comparison.
struct Value {
  enum class Kind { String, Number, Identifier };
  Kind kind = Kind::String;
  std::string text;  // unescaped for strings, verbatim otherwise
  Span span;
};

// `unit NAME ["column"] [cardinality = N]`; `participant` is recorded as sugar.
struct UnitDecl {
  Ident name;
  std::optional<StringLit> id_column;
  std::optional<IntLit> cardinality;
  bool participant_sugar = false;
  Span span;
};

enum class MeasureSyntax { Continuous, Counts, Categories, Condition };

struct MeasureDecl {
  Ident name;
  MeasureSyntax syntax = MeasureSyntax::Continuous;
  std::vector<StringLit> levels;  // Categories / Condition only
  bool ordered = false;
  Ident owner;
  std::optional<IntLit> cardinality;
  Span span;
};

struct ComparisonAst {
  Ident variable;
  CompareOp op = CompareOp::Increases;
  std::optional<Value> value;  // present for Equals / NotEquals
  Span span;
};

struct RelationshipStmt {
  Certainty certainty = Certainty::Assume;
  RelationShape shape = RelationShape::Causes;
  Ident first;
  Ident second;
  std::optional<ComparisonAst> when;
  std::optional<ComparisonAst> then;
  Span span;
};

struct InteractsStmt {
  std::vector<Ident> variables;
  Span span;
};

struct QueryStmt {
  Ident iv;
  Ident dv;
  Span span;
};

using Statement =
    std::variant<UnitDecl, MeasureDecl, RelationshipStmt, InteractsStmt, QueryStmt>;

struct Program {
  std::vector<Statement> statements;  // source order
};

// Equality that ignores spans. Two programs are structurally identical when
// they declare the same statements in the same order with the same payloads.
bool structurally_equal(const Program& a, const Program& b);

}  // namespace cmc::dsl
