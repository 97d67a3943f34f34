#include <sstream>

#include "cmc/dsl/parser.hpp"

namespace cmc::dsl {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string render(const ComparisonAst& cmp) {
  std::string out = cmp.variable.name;
  switch (cmp.op) {
    case CompareOp::Increases: return out + " increases";
    case CompareOp::Decreases: return out + " decreases";
    case CompareOp::Equals: out += " == "; break;
    case CompareOp::NotEquals: out += " != "; break;
  }
  if (cmp.value) {
    out += cmp.value->kind == Value::Kind::String ? quote(cmp.value->text)
                                                  : cmp.value->text;
  }
  return out;
}

struct Printer {
  std::ostringstream& out;

  void operator()(const UnitDecl& d) {
    out << (d.participant_sugar ? "participant " : "unit ") << d.name.name;
    if (d.id_column) out << ' ' << quote(d.id_column->value);
    if (d.cardinality) out << " cardinality = " << d.cardinality->value;
  }

  void operator()(const MeasureDecl& d) {
    out << "measure " << d.name.name << " = ";
    switch (d.syntax) {
      case MeasureSyntax::Continuous: out << "continuous"; break;
      case MeasureSyntax::Counts: out << "counts"; break;
      case MeasureSyntax::Categories:
      case MeasureSyntax::Condition: {
        out << (d.syntax == MeasureSyntax::Categories ? "categories" : "condition")
            << '[';
        for (std::size_t i = 0; i < d.levels.size(); ++i) {
          if (i) out << ", ";
          out << quote(d.levels[i].value);
        }
        out << ']';
        if (d.ordered) out << " ordered";
        break;
      }
    }
    out << '(' << d.owner.name;
    if (d.cardinality) out << ", cardinality = " << d.cardinality->value;
    out << ')';
  }

  void operator()(const RelationshipStmt& r) {
    out << (r.certainty == Certainty::Assume ? "assume " : "hypothesize ")
        << (r.shape == RelationShape::Causes ? "causes(" : "relates(")
        << r.first.name << ", " << r.second.name;
    if (r.when) out << ", when = " << render(*r.when);
    if (r.then) out << ", then = " << render(*r.then);
    out << ')';
  }

  void operator()(const InteractsStmt& s) {
    out << "interacts(";
    for (std::size_t i = 0; i < s.variables.size(); ++i) {
      if (i) out << ", ";
      out << s.variables[i].name;
    }
    out << ')';
  }

  void operator()(const QueryStmt& q) {
    out << "query ace(" << q.iv.name << " -> " << q.dv.name << ')';
  }
};

}  // namespace

std::string print_program(const Program& program) {
  std::ostringstream out;
  for (const auto& stmt : program.statements) {
    std::visit(Printer{out}, stmt);
    out << '\n';
  }
  return out.str();
}

}  // namespace cmc::dsl
