#include <algorithm>
#include <map>

#include "cmc/data/data.hpp"

namespace cmc::data {

namespace {

std::string list(const std::vector<std::string>& values, std::size_t limit = 5) {
  std::string out;
  for (std::size_t i = 0; i < values.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += "'" + values[i] + "'";
  }
  if (values.size() > limit) out += ", ...";
  return out;
}

}  // namespace

ReconcileResult reconcile(const dsl::ConceptualModel& cm,
                          const std::vector<ColumnProfile>& profiles) {
  std::map<std::string, const ColumnProfile*> by_name;
  for (const auto& p : profiles) by_name.emplace(p.name, &p);

  ReconcileResult result;
  dsl::ConceptualModel out = cm;
  auto report = [&](Severity s, DiagCode c, std::string msg, const Span& span) {
    result.diagnostics.push_back({s, c, std::move(msg), span});
  };

  auto fill_cardinality = [&](dsl::VariableDecl& v, const ColumnProfile& p) {
    const auto observed = static_cast<long long>(p.observed_distinct);
    if (!v.cardinality) {
      v.cardinality = observed;
    } else if (*v.cardinality != observed) {
      report(Severity::Warning, DiagCode::CardinalityConflict,
             "'" + v.name + "' declares cardinality " + std::to_string(*v.cardinality) +
                 " but column '" + p.name + "' has " + std::to_string(observed) +
                 " distinct values; keeping the declared value",
             v.span);
    }
  };

  for (auto& v : out.variables) {
    if (!v.is_measure()) {
      const std::string column = v.id_column.value_or(v.name);
      auto it = by_name.find(column);
      if (it != by_name.end()) {
        fill_cardinality(v, *it->second);
      } else if (v.id_column) {
        report(Severity::Error, DiagCode::MissingColumn,
               "unit '" + v.name + "' names id column '" + column +
                   "', which is not in the data",
               v.span);
      }
      continue;
    }

    auto it = by_name.find(v.name);
    if (it == by_name.end()) {
      report(Severity::Error, DiagCode::MissingColumn,
             "measure '" + v.name + "' has no column in the data", v.span);
      continue;
    }
    const ColumnProfile& p = *it->second;

    switch (v.mtype.kind) {
      case dsl::MeasureKind::Continuous:
        if (p.observed_type_guess == TypeGuess::Text) {
          report(Severity::Error, DiagCode::TypeMismatch,
                 "measure '" + v.name + "' is continuous but its column holds text", v.span);
        }
        break;
      case dsl::MeasureKind::Counts:
        if (p.observed_type_guess != TypeGuess::Integer) {
          report(Severity::Error, DiagCode::TypeMismatch,
                 "measure '" + v.name + "' is counts but its column holds " +
                     (p.observed_type_guess == TypeGuess::Text ? "text" : "non-integer numbers"),
                 v.span);
        } else if (p.has_negative) {
          report(Severity::Error, DiagCode::NegativeCount,
                 "measure '" + v.name + "' is counts but its column has negative values",
                 v.span);
        }
        break;
      case dsl::MeasureKind::OrderedCategories:
      case dsl::MeasureKind::UnorderedCategories: {
        fill_cardinality(v, p);
        if (!v.mtype.levels.empty()) {
          std::vector<std::string> extra;
          for (const auto& value : p.distinct_values) {
            if (std::find(v.mtype.levels.begin(), v.mtype.levels.end(), value) ==
                v.mtype.levels.end()) {
              extra.push_back(value);
            }
          }
          if (!extra.empty()) {
            report(Severity::Warning, DiagCode::UndeclaredLevels,
                   "column '" + p.name + "' has values not declared as levels of '" +
                       v.name + "': " + list(extra),
                   v.span);
          }
        }
        break;
      }
    }

    if (p.missing_count > 0) {
      std::string note = "'" + v.name + "' has " + std::to_string(p.missing_count) +
                         " missing value" + (p.missing_count == 1 ? "" : "s") + " in " +
                         std::to_string(p.row_count) + " rows";
      report(Severity::Note, DiagCode::MissingValues, note, v.span);
      result.data_notes.push_back(std::move(note));
    }
  }

  if (!has_errors(result.diagnostics)) result.model = std::move(out);
  return result;
}

}  // namespace cmc::data
