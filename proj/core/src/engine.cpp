#include "probranch/engine.hpp"

#include <algorithm>
#include <tuple>

#include "probranch/case_theory.hpp"
#include "probranch/theta.hpp"
#include "probranch/xbar.hpp"

namespace probranch {

namespace {

using NodeKey = std::tuple<int, int, int, int, int, int, bool>;

NodeKey key_of(const SyntacticNode& n) {
  return {static_cast<int>(n.category), static_cast<int>(n.spec),
          static_cast<int>(n.comp),     n.head_index,
          n.grid_index,                 n.remaining_internal,
          n.external_pending};
}

constexpr std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b,
                                       std::uint64_t cap) {
  if (a == 0 || b == 0) return 0;
  if (a > cap / b) return cap;
  return std::min(a * b, cap);
}

}  // namespace

const std::vector<ChartItem>& ParseForest::items(Span span) const {
  static const std::vector<ChartItem> empty;
  auto it = cells_.find(span);
  return it == cells_.end() ? empty : it->second;
}

std::size_t ParseForest::item_count() const {
  std::size_t total = 0;
  for (const auto& [span, cell] : cells_) total += cell.size();
  return total;
}

namespace {

class Expander {
 public:
  explicit Expander(const std::map<Span, std::vector<ChartItem>>& cells)
      : cells_(cells) {}

  std::uint64_t count(const ChartItem& item, std::uint64_t cap) {
    auto [it, fresh] = counts_.try_emplace(&item, 0);
    if (!fresh) return it->second;
    std::uint64_t total = 0;
    if (item.derivations.empty()) {
      total = 1;
    } else {
      for (const Derivation& d : item.derivations) {
        std::uint64_t ways = saturating_mul(count(resolve(d.left), cap),
                                            count(resolve(d.right), cap), cap);
        total = std::min(total + ways, cap);
      }
    }
    counts_[&item] = total;
    return total;
  }

  const std::vector<TreePtr>& expand(const ChartItem& item) {
    auto it = trees_.find(&item);
    if (it != trees_.end()) return it->second;
    std::vector<TreePtr> out;
    if (item.derivations.empty()) {
      out.push_back(make_leaf(item.node));
    } else {
      for (const Derivation& d : item.derivations) {
        for (const TreePtr& l : expand(resolve(d.left))) {
          for (const TreePtr& r : expand(resolve(d.right))) {
            out.push_back(make_branch(item.node, d.schema_id, l, r,
                                      d.theta_event, d.case_event));
          }
        }
      }
    }
    return trees_.emplace(&item, std::move(out)).first->second;
  }

 private:
  const ChartItem& resolve(const ItemRef& ref) const {
    return cells_.at(ref.span)[ref.index];
  }

  const std::map<Span, std::vector<ChartItem>>& cells_;
  std::map<const ChartItem*, std::uint64_t> counts_;
  std::map<const ChartItem*, std::vector<TreePtr>> trees_;
};

}  // namespace

ParseForest parse(const std::vector<std::string>& tokens,
                  const Lexicon& lexicon, const ParseOptions& options) {
  if (tokens.empty()) throw EmptyInputError("no tokens to parse");
  ParseForest forest;
  forest.tokens_ = tokens;
  const int n = static_cast<int>(tokens.size());

  for (int i = 0; i < n; ++i) {
    const auto* entries = lexicon.find(tokens[i]);
    if (!entries) throw OovError(tokens[i]);
    auto& cell = forest.cells_[Span{i, i + 1}];
    for (const LexicalEntry* entry : *entries) {
      for (const ThetaGrid& grid : entry->grids) {
        cell.push_back(ChartItem{leaf_node(*entry, grid, i), {}});
      }
    }
  }

  for (int width = 2; width <= n; ++width) {
    for (int begin = 0; begin + width <= n; ++begin) {
      const Span span{begin, begin + width};
      std::vector<ChartItem> cell;
      std::map<NodeKey, int> index;
      for (int mid = begin + 1; mid < span.end; ++mid) {
        const Span lspan{begin, mid};
        const Span rspan{mid, span.end};
        const auto& lcell = forest.cells_[lspan];
        const auto& rcell = forest.cells_[rspan];
        for (int li = 0; li < static_cast<int>(lcell.size()); ++li) {
          for (int ri = 0; ri < static_cast<int>(rcell.size()); ++ri) {
            const SyntacticNode& lnode = lcell[li].node;
            const SyntacticNode& rnode = rcell[ri].node;
            for (Licensed& lic : license_pair(lnode, rnode)) {
              Side nonhead = other_side(head_side(lic.schema_id));
              const SyntacticNode& head =
                  nonhead == Side::Left ? rnode : lnode;
              const SyntacticNode& arg =
                  nonhead == Side::Left ? lnode : rnode;
              std::optional<CaseEvent> case_event;
              if (auto assignment =
                      assign_case(lic.schema_id, head, arg, nonhead)) {
                case_event = CaseEvent{assignment->value, assignment->receiver,
                                       assignment->assigner_index};
              }
              Derivation deriv{lic.schema_id,
                               ItemRef{lspan, li},
                               ItemRef{rspan, ri},
                               lic.theta_event,
                               case_event};
              auto [it, fresh] =
                  index.try_emplace(key_of(lic.mother),
                                    static_cast<int>(cell.size()));
              if (fresh) {
                cell.push_back(ChartItem{std::move(lic.mother), {}});
              }
              cell[it->second].derivations.push_back(deriv);
            }
          }
        }
      }
      forest.cells_[span] = std::move(cell);
    }
  }

  const Span full{0, n};
  Expander expander(forest.cells_);
  const std::uint64_t cap = options.max_markers;
  std::uint64_t total = 0;
  for (const ChartItem& item : forest.cells_[full]) {
    if (n == 1 || !item.derivations.empty()) {
      total = std::min(total + expander.count(item, cap + 1), cap + 1);
    }
  }
  if (total > cap) {
    throw CapExceededError("sentence yields more than " +
                           std::to_string(cap) + " phrase markers");
  }

  for (const ChartItem& item : forest.cells_[full]) {
    if (n > 1 && item.derivations.empty()) continue;  // unreachable leftovers
    for (const TreePtr& tree : expander.expand(item)) {
      PhraseMarker marker(tree);
      if (!check_complete(marker)) continue;
      if (options.apply_case_filter && !case_filter(marker)) continue;
      forest.completed_.push_back(std::move(marker));
    }
  }
  return forest;
}

std::vector<PhraseMarker> enumerate_markers(const ParseForest& forest) {
  std::vector<PhraseMarker> out = forest.completed();
  std::sort(out.begin(), out.end(),
            [](const PhraseMarker& a, const PhraseMarker& b) {
              return a.detail_string() < b.detail_string();
            });
  return out;
}

}  // namespace probranch
