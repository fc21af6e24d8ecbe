#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "probranch/model.hpp"

namespace probranch {

struct DischargeResult {
  SyntacticNode head;  // head projection after the discharge
  ThetaRole role;      // the role that was consumed
};

// Consumes one role of the head's grid for `argument`.
//   internal: the next internal role in grid order; remaining_internal drops
//             and comp flips to minus when it reaches zero.
//   external: the grid's external role; external_pending clears.
// The argument must not already bear a role and must have a saturated grid
// (comp = minus); its spec feature is the schemata's business.
DischargeResult discharge(const SyntacticNode& head,
                          const SyntacticNode& argument, RolePosition kind);

// True iff every leaf's selected grid is fully discharged within the marker
// (internal and external alike), judged from the recorded theta events.
bool check_complete(const PhraseMarker& marker);

struct GridStat {
  long long count = 0;
  double probability = 0.0;

  bool operator==(const GridStat&) const = default;
};

// Per-head theta-grid distribution: P(grid | head) by relative frequency.
struct ThetaTable {
  // head word -> grid identity -> stat; grid identity as ThetaGrid::identity().
  std::map<std::string, std::map<std::string, GridStat>> heads;
  double default_probability = 1.0;  // applied to heads absent from the table

  // default_probability for an absent head; UnseenGridError when the head is
  // present but the grid identity was never observed with it.
  double probability(const std::string& word,
                     const std::string& grid_identity) const;

  bool operator==(const ThetaTable&) const = default;
};

// Relative-frequency estimation over (head word, grid identity) observations.
ThetaTable estimate_theta_table(
    const std::vector<std::pair<std::string, std::string>>& observations,
    double default_probability = 1.0);

// Product over leaves of P(selected grid | head word), charged once per head
// at grid selection. Requires check_complete(marker).
double theta_parse_probability(const PhraseMarker& marker,
                               const ThetaTable& table);

// Sorted-order log-factor sum; equal factor multisets give identical totals.
double theta_log_probability(const PhraseMarker& marker,
                             const ThetaTable& table);

}  // namespace probranch
