#include "probranch/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace probranch {

DischargeResult discharge(const SyntacticNode& head,
                          const SyntacticNode& argument, RolePosition kind) {
  if (argument.assigned_role) {
    throw DoubleRoleError("argument '" + argument.head_word +
                          "' already bears a theta role");
  }
  if (argument.comp == Mark::Plus) {
    throw CriterionViolationError(
        "argument '" + argument.head_word +
        "' still has undischarged roles of its own");
  }
  if (kind == RolePosition::Internal) {
    const ThetaRole* role = head.next_internal_role();
    if (!role) {
      throw CriterionViolationError("head '" + head.head_word +
                                    "' has no internal role to discharge");
    }
    if (role->selects != argument.category) {
      throw SelectionError("role " + role->to_text() + " of '" +
                           head.head_word + "' does not select " +
                           std::string(to_string(argument.category)));
    }
    SyntacticNode updated = head;
    updated.remaining_internal -= 1;
    if (updated.remaining_internal == 0) updated.comp = Mark::Minus;
    return DischargeResult{std::move(updated), *role};
  }
  if (!head.external_pending) {
    throw CriterionViolationError("head '" + head.head_word +
                                  "' has no external role to discharge");
  }
  const ThetaRole* role = head.selected_grid().external_role();
  if (role->selects != argument.category) {
    throw SelectionError("role " + role->to_text() + " of '" + head.head_word +
                         "' does not select " +
                         std::string(to_string(argument.category)));
  }
  SyntacticNode updated = head;
  updated.external_pending = false;
  return DischargeResult{std::move(updated), *role};
}

bool check_complete(const PhraseMarker& marker) {
  // Tally discharge events per licensing head leaf, then require every
  // leaf's grid to be fully consumed.
  std::map<int, int> internal_events;
  std::map<int, int> external_events;
  for (const ParseTree* branch : marker.branches()) {
    if (!branch->theta_event) continue;
    const ThetaEvent& ev = *branch->theta_event;
    if (ev.role.position == RolePosition::Internal) {
      internal_events[ev.licenser_index] += 1;
    } else {
      external_events[ev.licenser_index] += 1;
    }
  }
  for (const ParseTree* leaf : marker.leaves()) {
    const SyntacticNode& n = leaf->node;
    const ThetaGrid& grid = n.selected_grid();
    if (internal_events[n.head_index] != grid.internal_count()) return false;
    if (external_events[n.head_index] != (grid.has_external() ? 1 : 0)) {
      return false;
    }
  }
  return true;
}

double ThetaTable::probability(const std::string& word,
                               const std::string& grid_identity) const {
  auto head = heads.find(word);
  if (head == heads.end()) return default_probability;
  auto grid = head->second.find(grid_identity);
  if (grid == head->second.end()) {
    throw UnseenGridError("grid " + grid_identity + " never observed with '" +
                          word + "'");
  }
  return grid->second.probability;
}

ThetaTable estimate_theta_table(
    const std::vector<std::pair<std::string, std::string>>& observations,
    double default_probability) {
  if (observations.empty()) {
    throw EmptyCorpusError("no theta observations");
  }
  if (!(default_probability > 0.0) || default_probability > 1.0) {
    throw std::invalid_argument("default probability must be in (0,1]");
  }
  ThetaTable table;
  table.default_probability = default_probability;
  for (const auto& [word, identity] : observations) {
    table.heads[word][identity].count += 1;
  }
  for (auto& [word, grids] : table.heads) {
    long long total = 0;
    for (const auto& [identity, stat] : grids) total += stat.count;
    for (auto& [identity, stat] : grids) {
      stat.probability =
          static_cast<double>(stat.count) / static_cast<double>(total);
    }
  }
  return table;
}

double theta_log_probability(const PhraseMarker& marker,
                             const ThetaTable& table) {
  if (!check_complete(marker)) {
    throw CriterionViolationError(
        "marker has undischarged theta roles; cannot score");
  }
  std::vector<double> logs;
  for (const ParseTree* leaf : marker.leaves()) {
    const SyntacticNode& n = leaf->node;
    double p = table.probability(n.head_word, n.selected_grid().identity());
    logs.push_back(std::log(p));
  }
  // Summing in sorted order makes equal factor multisets give bit-identical
  // totals, so genuine ties stay ties.
  std::sort(logs.begin(), logs.end());
  return std::accumulate(logs.begin(), logs.end(), 0.0);
}

double theta_parse_probability(const PhraseMarker& marker,
                               const ThetaTable& table) {
  return std::exp(theta_log_probability(marker, table));
}

}  // namespace probranch
