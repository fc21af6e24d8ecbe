#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "probranch/model.hpp"

namespace probranch {

struct ParseOptions {
  bool apply_case_filter = true;
  // Hard cap on completed markers per sentence; exceeding it is an error,
  // never silent truncation.
  std::size_t max_markers = 10000;
};

struct ItemRef {
  Span span;
  int index = 0;
};

// One way an item was built: a schema over two chart items plus the events
// recorded at licensing time.
struct Derivation {
  int schema_id = 0;
  ItemRef left;
  ItemRef right;
  std::optional<ThetaEvent> theta_event;
  std::optional<CaseEvent> case_event;
};

struct ChartItem {
  SyntacticNode node;
  std::vector<Derivation> derivations;  // empty for lexical leaves
};

// Packed forest over one sentence: per-span items with back-references to
// the branches that built them, plus the fully expanded completed markers.
class ParseForest {
 public:
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<ChartItem>& items(Span span) const;
  const std::vector<PhraseMarker>& completed() const { return completed_; }
  std::size_t item_count() const;

 private:
  friend ParseForest parse(const std::vector<std::string>&, const Lexicon&,
                           const ParseOptions&);
  std::vector<std::string> tokens_;
  std::map<Span, std::vector<ChartItem>> cells_;
  std::vector<PhraseMarker> completed_;
};

// Exhaustively enumerates the complete phrase markers of the token sequence
// whose every local tree is a licensed proper branch, whose leaves are
// lexicon-consistent grid selections, that pass the theta criterion, and —
// when the filter is enabled — the case filter.
ParseForest parse(const std::vector<std::string>& tokens,
                  const Lexicon& lexicon, const ParseOptions& options = {});

// All completed markers in canonical (serialization-lexicographic) order.
std::vector<PhraseMarker> enumerate_markers(const ParseForest& forest);

}  // namespace probranch
