#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "probranch/model.hpp"

namespace probranch {

// One licensed instantiation of a schema over a daughter pair. The mother
// already carries the discharge effects for complement schemata.
struct Licensed {
  int schema_id = 0;
  SyntacticNode mother;
  std::optional<ThetaEvent> theta_event;
};

// Every schema instantiation consistent with the daughters, writing a node
// as Cat(spec, comp) and marking the head daughter H:
//   (1) specifier:          X(-,-) <- Y(-,-) . H:X(+,-)        X != Y
//   (2) non-final complement: X(S,+) <- H:X(S,+) . Y(s,-)      X != Y
//   (3) final complement:    X(S,-) <- H:X(S,+) . Y(-,-)       X != Y
//   (4) right adjunct:       X(S,-) <- H:X(S,-) . Y(-,-)       X != Y
//   (5) left adjunct:        X(S,-) <- Y(-,-) . H:X(S,-)       X != Y
// Schema 2's non-head daughter spec (s) is unconstrained. Schemata 2 and 3
// are gated by theta discharge: the head's next internal role must select the
// attached category, with >= 2 roles remaining before attachment for (2) and
// exactly 1 for (3). Schema 1 discharges the head's external role when one is
// pending; a pending external role that cannot discharge blocks the branch.
std::vector<Licensed> license_pair(const SyntacticNode& left,
                                   const SyntacticNode& right);

// The (schema id, mother) view of license_pair.
std::vector<std::pair<int, SyntacticNode>> match_schemata(
    const SyntacticNode& left, const SyntacticNode& right);

enum class Conditioning : std::uint8_t { Flat, MotherConditioned };

std::string_view to_string(Conditioning c);
std::optional<Conditioning> conditioning_from_string(std::string_view s);

// Mother-equivalence class of a schema for conditioned estimation:
// {1} alone, {2} alone, {3,4,5} together.
int schema_class(int schema_id);

// Schema-application probabilities, estimated flat (over all branches) or
// normalized within mother-equivalence classes.
struct SchemaTable {
  Conditioning mode = Conditioning::Flat;
  std::array<long long, 5> counts{};       // index 0 holds schema 1
  std::array<double, 5> probabilities{};

  long long total_count() const;
  double probability(int schema_id) const;

  bool operator==(const SchemaTable&) const = default;
};

// entries[s] = count[s] / sum of all counts.
SchemaTable estimate_flat(const std::map<int, long long>& branch_counts);

// Normalized within {1}, {2}, {3,4,5}; schemata 1 and 2 therefore get
// probability 1 whenever observed.
SchemaTable estimate_mother_conditioned(
    const std::map<int, long long>& branch_counts);

// Product over the marker's branches of the schema probabilities.
// UnseenSchemaError when a branch's schema has no positive probability.
double xbar_parse_probability(const PhraseMarker& marker,
                              const SchemaTable& table);

// Sorted-order log-factor sum; equal factor multisets give identical totals.
double xbar_log_probability(const PhraseMarker& marker,
                            const SchemaTable& table);

}  // namespace probranch
