#include <algorithm>
#include <map>
#include <set>

#include "cmc/dsl/model.hpp"

namespace cmc::dsl {

std::string_view measure_kind_name(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Continuous: return "continuous";
    case MeasureKind::Counts: return "counts";
    case MeasureKind::OrderedCategories: return "ordered categories";
    case MeasureKind::UnorderedCategories: return "unordered categories";
  }
  return "measure";
}

const VariableDecl* ConceptualModel::find(std::string_view name) const {
  for (const auto& v : variables) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

VariableDecl* ConceptualModel::find(std::string_view name) {
  for (auto& v : variables) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

std::vector<std::string> ConceptualModel::measure_names() const {
  std::vector<std::string> names;
  for (const auto& v : variables) {
    if (v.is_measure()) names.push_back(v.name);
  }
  std::sort(names.begin(), names.end());
  return names;
}

namespace {

std::string cmp_text(const Comparison& c) {
  switch (c.op) {
    case CompareOp::Increases: return c.variable + " increases";
    case CompareOp::Decreases: return c.variable + " decreases";
    case CompareOp::Equals: return c.variable + " == " + c.value.value_or("");
    case CompareOp::NotEquals: return c.variable + " != " + c.value.value_or("");
  }
  return c.variable;
}

bool is_integer_text(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

class Validator {
 public:
  explicit Validator(const Program& p) : program_(p) {}

  ValidationResult run() {
    collect_declarations();
    std::vector<const QueryStmt*> queries;
    for (const auto& stmt : program_.statements) {
      if (auto* rel = std::get_if<RelationshipStmt>(&stmt)) check_relationship(*rel);
      if (auto* inter = std::get_if<InteractsStmt>(&stmt)) check_interaction(*inter);
      if (auto* q = std::get_if<QueryStmt>(&stmt)) queries.push_back(q);
    }
    std::optional<Query> query = check_query(queries);

    ValidationResult result;
    result.diagnostics = std::move(diags_);
    if (!has_errors(result.diagnostics) && query) {
      result.program = ValidatedProgram{std::move(model_), *query};
    }
    return result;
  }

 private:
  void error(DiagCode code, std::string msg, Span span) {
    diags_.push_back(Diagnostic{Severity::Error, code, std::move(msg), span});
  }

  void collect_declarations() {
    // Units first so measures may precede their owner textually.
    std::set<std::string> units;
    for (const auto& stmt : program_.statements) {
      if (auto* u = std::get_if<UnitDecl>(&stmt)) units.insert(u->name.name);
    }
    std::set<std::string> seen;
    for (const auto& stmt : program_.statements) {
      if (auto* u = std::get_if<UnitDecl>(&stmt)) {
        if (!seen.insert(u->name.name).second) continue;  // parser reported it
        VariableDecl decl;
        decl.name = u->name.name;
        decl.kind = VariableKind::Unit;
        decl.span = u->name.span;
        if (u->id_column) decl.id_column = u->id_column->value;
        if (u->cardinality) {
          if (u->cardinality->value < 1) {
            error(DiagCode::InvalidCardinality, "unit cardinality must be at least 1",
                  u->cardinality->span);
          }
          decl.cardinality = u->cardinality->value;
        }
        model_.variables.push_back(std::move(decl));
      } else if (auto* m = std::get_if<MeasureDecl>(&stmt)) {
        if (!seen.insert(m->name.name).second) continue;
        model_.variables.push_back(measure(*m, units));
      }
    }
  }

  VariableDecl measure(const MeasureDecl& m, const std::set<std::string>& units) {
    VariableDecl decl;
    decl.name = m.name.name;
    decl.kind = VariableKind::Measure;
    decl.owner = m.owner.name;
    decl.span = m.name.span;
    if (!units.count(m.owner.name)) {
      error(DiagCode::UnknownUnit, "'" + m.owner.name + "' is not a declared unit",
            m.owner.span);
    }
    switch (m.syntax) {
      case MeasureSyntax::Continuous: decl.mtype.kind = MeasureKind::Continuous; break;
      case MeasureSyntax::Counts: decl.mtype.kind = MeasureKind::Counts; break;
      case MeasureSyntax::Categories:
      case MeasureSyntax::Condition:
        decl.mtype.kind = m.ordered ? MeasureKind::OrderedCategories
                                    : MeasureKind::UnorderedCategories;
        decl.mtype.is_condition = m.syntax == MeasureSyntax::Condition;
        break;
    }
    std::set<std::string> levels;
    for (const auto& lvl : m.levels) {
      if (!levels.insert(lvl.value).second) {
        error(DiagCode::DuplicateLevel,
              "level \"" + lvl.value + "\" is listed more than once", lvl.span);
      }
      decl.mtype.levels.push_back(lvl.value);
    }
    if (m.cardinality) {
      long long min = decl.mtype.categorical() ? 2 : 1;
      if (m.cardinality->value < min) {
        error(DiagCode::InvalidCardinality,
              "cardinality of '" + m.name.name + "' must be at least " +
                  std::to_string(min),
              m.cardinality->span);
      }
      decl.cardinality = m.cardinality->value;
    }
    return decl;
  }

  const VariableDecl* resolve_measure(const Ident& id) {
    const VariableDecl* v = model_.find(id.name);
    if (!v) {
      error(DiagCode::UnknownVariable, "unknown variable '" + id.name + "'", id.span);
      return nullptr;
    }
    if (!v->is_measure()) {
      error(DiagCode::NotAMeasure,
            "'" + id.name + "' is a unit; only measures can appear here", id.span);
      return nullptr;
    }
    return v;
  }

  std::optional<Comparison> check_comparison(const ComparisonAst& c,
                                             const VariableDecl* target,
                                             const char* clause) {
    Comparison out{c.variable.name, c.op, std::nullopt};
    if (c.value) out.value = c.value->text;
    if (!target) return out;
    if (c.variable.name != target->name) {
      error(DiagCode::ComparisonVariableMismatch,
            std::string("'") + clause + "' must refer to '" + target->name +
                "', not '" + c.variable.name + "'",
            c.variable.span);
      return out;
    }
    const MeasureType& t = target->mtype;
    if ((c.op == CompareOp::Increases || c.op == CompareOp::Decreases) &&
        t.kind == MeasureKind::UnorderedCategories) {
      error(DiagCode::ComparisonTypeMismatch,
            std::string(c.op == CompareOp::Increases ? "'increases'" : "'decreases'") +
                " does not apply to unordered categories measure '" + target->name + "'",
            c.span);
    }
    if (c.value) {
      const Value& v = *c.value;
      if (t.categorical()) {
        if (std::find(t.levels.begin(), t.levels.end(), v.text) == t.levels.end()) {
          error(DiagCode::UnknownLevel,
                "'" + v.text + "' is not a declared level of '" + target->name + "'",
                v.span);
        }
      } else if (v.kind != Value::Kind::Number ||
                 (t.kind == MeasureKind::Counts && !is_integer_text(v.text))) {
        error(DiagCode::ComparisonTypeMismatch,
              "'" + v.text + "' is not a valid value for " +
                  std::string(measure_kind_name(t.kind)) + " measure '" +
                  target->name + "'",
              v.span);
      }
    }
    return out;
  }

  void check_relationship(const RelationshipStmt& r) {
    const VariableDecl* a = resolve_measure(r.first);
    const VariableDecl* b = resolve_measure(r.second);
    if (r.first.name == r.second.name) {
      error(DiagCode::SelfRelationship,
            "a relationship needs two different variables; got '" + r.first.name +
                "' twice",
            r.span);
      return;
    }
    Relationship rel;
    rel.shape = r.shape;
    rel.first = r.first.name;
    rel.second = r.second.name;
    rel.certainty = r.certainty;
    rel.span = r.span;
    if (r.when) rel.when = check_comparison(*r.when, a, "when");
    if (r.then) rel.then = check_comparison(*r.then, b, "then");

    auto key = relationship_key(rel);
    auto [it, inserted] = relationship_keys_.emplace(key, r.span);
    if (!inserted) {
      error(DiagCode::DuplicateRelationship,
            "duplicate relationship; first stated at line " +
                std::to_string(it->second.line),
            r.span);
      return;
    }
    model_.relationships.push_back(std::move(rel));
  }

  static std::string relationship_key(const Relationship& r) {
    std::string a = r.first, b = r.second;
    if (r.shape == RelationShape::Relates && b < a) std::swap(a, b);
    return (r.shape == RelationShape::Causes ? "causes:" : "relates:") + a + "|" + b;
  }

  void check_interaction(const InteractsStmt& s) {
    InteractionAnnotation ann;
    ann.span = s.span;
    std::set<std::string> seen;
    for (const auto& id : s.variables) {
      resolve_measure(id);
      if (!seen.insert(id.name).second) {
        error(DiagCode::DuplicateInteractionVariable,
              "'" + id.name + "' appears more than once in interacts()", id.span);
        continue;
      }
      ann.variables.push_back(id.name);
    }
    if (ann.variables.size() < 2) {
      error(DiagCode::InteractionArity, "interacts() needs at least two variables",
            s.span);
      return;
    }
    model_.interactions.push_back(std::move(ann));
  }

  std::optional<Query> check_query(const std::vector<const QueryStmt*>& queries) {
    if (queries.empty()) {
      Span end;
      end.line = 1;
      end.column = 1;
      if (!program_.statements.empty()) {
        end = std::visit([](const auto& s) { return s.span; },
                         program_.statements.back());
      }
      error(DiagCode::MissingQuery, "program has no 'query ace(iv -> dv)' statement",
            end);
      return std::nullopt;
    }
    for (std::size_t i = 1; i < queries.size(); ++i) {
      error(DiagCode::MultipleQueries, "only one query is allowed per program",
            queries[i]->span);
    }
    const QueryStmt& q = *queries.front();
    const VariableDecl* iv = resolve_measure(q.iv);
    const VariableDecl* dv = resolve_measure(q.dv);
    if (q.iv.name == q.dv.name) {
      error(DiagCode::SelfRelationship, "query needs two different variables",
            q.span);
      return std::nullopt;
    }
    if (!iv || !dv) return std::nullopt;
    bool related = std::any_of(
        model_.relationships.begin(), model_.relationships.end(),
        [&](const Relationship& r) {
          return (r.first == iv->name && r.second == dv->name) ||
                 (r.first == dv->name && r.second == iv->name);
        });
    if (!related) {
      error(DiagCode::QueryWithoutRelationship,
            "no relationship connects '" + iv->name + "' and '" + dv->name +
                "'; state one with assume/hypothesize",
            q.span);
    }
    return Query{iv->name, dv->name, q.span};
  }

  const Program& program_;
  ConceptualModel model_;
  std::vector<Diagnostic> diags_;
  std::map<std::string, Span> relationship_keys_;
};

}  // namespace

ValidationResult validate(const Program& program) { return Validator(program).run(); }

std::string describe(const Relationship& rel) {
  std::string out = rel.certainty == Certainty::Assume ? "assume " : "hypothesize ";
  out += rel.shape == RelationShape::Causes ? "causes(" : "relates(";
  out += rel.first + ", " + rel.second + ")";
  if (rel.when) out += ", when " + cmp_text(*rel.when);
  if (rel.then) out += ", then " + cmp_text(*rel.then);
  return out;
}

}  // namespace cmc::dsl
