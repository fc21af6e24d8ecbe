#include "probranch/xbar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "probranch/theta.hpp"

namespace probranch {

std::vector<Licensed> license_pair(const SyntacticNode& left,
                                   const SyntacticNode& right) {
  if (left.span.end != right.span.begin) {
    std::ostringstream msg;
    msg << "daughter spans [" << left.span.begin << "," << left.span.end
        << ") and [" << right.span.begin << "," << right.span.end
        << ") are not adjacent";
    throw SpanError(msg.str());
  }
  const Span joined{left.span.begin, right.span.end};
  const bool distinct = left.category != right.category;
  std::vector<Licensed> out;

  // (1) specifier: Y(-,-) . H:X(+,-) -> X(-,-)
  if (distinct && left.is_maximal() && !left.assigned_role &&
      right.spec == Mark::Plus && right.comp == Mark::Minus) {
    if (right.external_pending) {
      const ThetaRole* ext = right.selected_grid().external_role();
      if (ext->selects == left.category) {
        DischargeResult d = discharge(right, left, RolePosition::External);
        out.push_back(Licensed{
            1, project(d.head, Mark::Minus, d.head.comp, joined),
            ThetaEvent{d.role, Side::Left, right.head_index}});
      }
      // A pending external role that cannot reach the specifier blocks the
      // branch: spec flips to minus here and the role could never discharge.
    } else {
      out.push_back(
          Licensed{1, project(right, Mark::Minus, right.comp, joined),
                   std::nullopt});
    }
  }

  // (2)/(3) complements: H:X(S,+) . Y — gated by the head's next internal
  // role. Schema 2 leaves the non-head spec unconstrained; schema 3 requires
  // a maximal projection.
  if (distinct && left.comp == Mark::Plus && right.comp == Mark::Minus &&
      !right.assigned_role) {
    const ThetaRole* next = left.next_internal_role();
    if (next && next->selects == right.category) {
      if (left.remaining_internal >= 2) {
        DischargeResult d = discharge(left, right, RolePosition::Internal);
        out.push_back(Licensed{
            2, project(d.head, left.spec, Mark::Plus, joined),
            ThetaEvent{d.role, Side::Right, left.head_index}});
      } else if (right.spec == Mark::Minus) {
        DischargeResult d = discharge(left, right, RolePosition::Internal);
        out.push_back(Licensed{
            3, project(d.head, left.spec, Mark::Minus, joined),
            ThetaEvent{d.role, Side::Right, left.head_index}});
      }
    }
  }

  // (4) right adjunct: H:X(S,-) . Y(-,-) -> X(S,-)
  if (distinct && left.comp == Mark::Minus && right.is_maximal() &&
      !right.assigned_role) {
    out.push_back(Licensed{4, project(left, left.spec, Mark::Minus, joined),
                           std::nullopt});
  }

  // (5) left adjunct: Y(-,-) . H:X(S,-) -> X(S,-)
  if (distinct && right.comp == Mark::Minus && left.is_maximal() &&
      !left.assigned_role) {
    out.push_back(Licensed{5, project(right, right.spec, Mark::Minus, joined),
                           std::nullopt});
  }

  return out;
}

std::vector<std::pair<int, SyntacticNode>> match_schemata(
    const SyntacticNode& left, const SyntacticNode& right) {
  std::vector<std::pair<int, SyntacticNode>> out;
  for (Licensed& lic : license_pair(left, right)) {
    out.emplace_back(lic.schema_id, std::move(lic.mother));
  }
  return out;
}

std::string_view to_string(Conditioning c) {
  return c == Conditioning::Flat ? "flat" : "mother";
}

std::optional<Conditioning> conditioning_from_string(std::string_view s) {
  if (s == "flat") return Conditioning::Flat;
  if (s == "mother") return Conditioning::MotherConditioned;
  return std::nullopt;
}

int schema_class(int schema_id) {
  switch (schema_id) {
    case 1: return 0;
    case 2: return 1;
    case 3:
    case 4:
    case 5: return 2;
  }
  throw std::invalid_argument("schema id out of range: " +
                              std::to_string(schema_id));
}

long long SchemaTable::total_count() const {
  return std::accumulate(counts.begin(), counts.end(), 0LL);
}

double SchemaTable::probability(int schema_id) const {
  if (schema_id < 1 || schema_id > 5) {
    throw std::invalid_argument("schema id out of range: " +
                                std::to_string(schema_id));
  }
  return probabilities[schema_id - 1];
}

namespace {

std::array<long long, 5> gather_counts(
    const std::map<int, long long>& branch_counts) {
  std::array<long long, 5> counts{};
  for (const auto& [id, count] : branch_counts) {
    if (id < 1 || id > 5) {
      throw std::invalid_argument("schema id out of range: " +
                                  std::to_string(id));
    }
    if (count < 0) {
      throw std::invalid_argument("negative schema count");
    }
    counts[id - 1] = count;
  }
  return counts;
}

}  // namespace

SchemaTable estimate_flat(const std::map<int, long long>& branch_counts) {
  SchemaTable table;
  table.mode = Conditioning::Flat;
  table.counts = gather_counts(branch_counts);
  long long total = table.total_count();
  if (total == 0) throw EmptyCorpusError("no schema applications observed");
  for (int i = 0; i < 5; ++i) {
    table.probabilities[i] =
        static_cast<double>(table.counts[i]) / static_cast<double>(total);
  }
  return table;
}

SchemaTable estimate_mother_conditioned(
    const std::map<int, long long>& branch_counts) {
  SchemaTable table;
  table.mode = Conditioning::MotherConditioned;
  table.counts = gather_counts(branch_counts);
  if (table.total_count() == 0) {
    throw EmptyCorpusError("no schema applications observed");
  }
  std::array<long long, 3> class_totals{};
  for (int i = 0; i < 5; ++i) {
    class_totals[schema_class(i + 1)] += table.counts[i];
  }
  for (int i = 0; i < 5; ++i) {
    long long denom = class_totals[schema_class(i + 1)];
    table.probabilities[i] =
        denom == 0 ? 0.0
                   : static_cast<double>(table.counts[i]) /
                         static_cast<double>(denom);
  }
  return table;
}

double xbar_log_probability(const PhraseMarker& marker,
                            const SchemaTable& table) {
  std::vector<double> logs;
  for (const ParseTree* branch : marker.branches()) {
    double p = table.probability(branch->schema_id);
    if (p <= 0.0) {
      throw UnseenSchemaError("schema " + std::to_string(branch->schema_id) +
                              " has no estimated probability");
    }
    logs.push_back(std::log(p));
  }
  std::sort(logs.begin(), logs.end());
  return std::accumulate(logs.begin(), logs.end(), 0.0);
}

double xbar_parse_probability(const PhraseMarker& marker,
                              const SchemaTable& table) {
  return std::exp(xbar_log_probability(marker, table));
}

}  // namespace probranch
