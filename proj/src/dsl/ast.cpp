#include "cmc/dsl/ast.hpp"

namespace cmc::dsl {

namespace {

bool eq(const Ident& a, const Ident& b) { return a.name == b.name; }

template <typename T, typename F>
bool eq_opt(const std::optional<T>& a, const std::optional<T>& b, F&& same) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same(*a, *b);
}

bool eq(const Value& a, const Value& b) { return a.kind == b.kind && a.text == b.text; }

bool eq(const ComparisonAst& a, const ComparisonAst& b) {
  return eq(a.variable, b.variable) && a.op == b.op &&
         eq_opt(a.value, b.value, [](auto& x, auto& y) { return eq(x, y); });
}

bool eq(const UnitDecl& a, const UnitDecl& b) {
  return eq(a.name, b.name) && a.participant_sugar == b.participant_sugar &&
         eq_opt(a.id_column, b.id_column,
                [](auto& x, auto& y) { return x.value == y.value; }) &&
         eq_opt(a.cardinality, b.cardinality,
                [](auto& x, auto& y) { return x.value == y.value; });
}

bool eq(const MeasureDecl& a, const MeasureDecl& b) {
  if (!eq(a.name, b.name) || a.syntax != b.syntax || a.ordered != b.ordered ||
      !eq(a.owner, b.owner) || a.levels.size() != b.levels.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    if (a.levels[i].value != b.levels[i].value) return false;
  }
  return eq_opt(a.cardinality, b.cardinality,
                [](auto& x, auto& y) { return x.value == y.value; });
}

bool eq(const RelationshipStmt& a, const RelationshipStmt& b) {
  auto same_cmp = [](auto& x, auto& y) { return eq(x, y); };
  return a.certainty == b.certainty && a.shape == b.shape && eq(a.first, b.first) &&
         eq(a.second, b.second) && eq_opt(a.when, b.when, same_cmp) &&
         eq_opt(a.then, b.then, same_cmp);
}

bool eq(const InteractsStmt& a, const InteractsStmt& b) {
  if (a.variables.size() != b.variables.size()) return false;
  for (std::size_t i = 0; i < a.variables.size(); ++i) {
    if (!eq(a.variables[i], b.variables[i])) return false;
  }
  return true;
}

bool eq(const QueryStmt& a, const QueryStmt& b) {
  return eq(a.iv, b.iv) && eq(a.dv, b.dv);
}

}  // namespace

bool structurally_equal(const Program& a, const Program& b) {
  if (a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i) {
    const auto& x = a.statements[i];
    const auto& y = b.statements[i];
    if (x.index() != y.index()) return false;
    bool same = std::visit(
        [&](const auto& lhs) {
          using T = std::decay_t<decltype(lhs)>;
          return eq(lhs, std::get<T>(y));
        },
        x);
    if (!same) return false;
  }
  return true;
}

}  // namespace cmc::dsl
