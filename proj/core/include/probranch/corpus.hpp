#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "probranch/model.hpp"
#include "probranch/theta.hpp"
#include "probranch/xbar.hpp"

namespace probranch {

// ---------------------------------------------------------------------------
// Bracketed training trees
//
// One tree per top-level s-expression:
//   internal node   (CAT:S:C child child)
//   leaf            (CAT:S:C =word)
// The head daughter is prefixed "^", complement daughters "+",
// adjunct/specifier daughters are unprefixed. S and C are the SPEC/COMP
// marks, "+" or "-". "#" starts a line comment.
// ---------------------------------------------------------------------------

struct CorpusNode {
  Category category = Category::N;
  Mark spec = Mark::Minus;
  Mark comp = Mark::Minus;
  bool head_marked = false;        // "^" prefix
  bool complement_marked = false;  // "+" prefix
  int line = 0;                    // 1-based source line
  std::string word;                // leaves only
  std::unique_ptr<CorpusNode> left;
  std::unique_ptr<CorpusNode> right;

  bool is_leaf() const { return !left; }
};

struct CorpusTree {
  std::unique_ptr<CorpusNode> root;
};

// Parses and validates a corpus document. LoadError carries the 1-based line
// of the offending construct.
std::vector<CorpusTree> read_corpus(std::string_view text);

struct CountBundle {
  std::map<int, long long> schema_counts;
  // (head word, grid identity) per verb leaf, in tree order.
  std::vector<std::pair<std::string, std::string>> theta_observations;
  long long tree_count = 0;

  long long total_branches() const;
};

// Classifies every internal node into exactly one schema (via the schema
// definitions and the head/complement marks) and collects, for every verb
// leaf, the grid identity formed by its complement-marked sisters along its
// projection path.
CountBundle extract_counts(const std::vector<CorpusTree>& trees);

// ---------------------------------------------------------------------------
// Lexicon file
//
// Line-oriented UTF-8, tab-separated fields:
//   word <TAB> category <TAB> spec <TAB> grid [<TAB> count]
// spec is "+" or "-"; grid is a semicolon-separated list of
// "label/position:category" terms ("agent/ext:N;theme/int:N") or "-" for the
// empty grid. One grid per line; lines of one (word, category) accumulate
// into a single entry. "#" starts a comment line.
// ---------------------------------------------------------------------------

Lexicon read_lexicon(std::string_view text);
std::string write_lexicon(const Lexicon& lexicon);

// Checks corpus leaves against the lexicon: known word, matching category and
// spec mark, and a grid whose identity matches the complement-marked sisters
// along the leaf's projection path. Throws LoadError naming the leaf's line.
void validate_against_lexicon(const std::vector<CorpusTree>& trees,
                              const Lexicon& lexicon);

// ---------------------------------------------------------------------------
// Probability-table file
//
//   probranch-tables 1 <flat|mother> <theta-default>
//   schema <id> <count> <probability>           (all five schemata)
//   theta <word> <grid-identity> <count> <probability>
// Probabilities are linear, 12 significant digits. Reading re-derives the
// probabilities from the counts and rejects files whose stored values
// deviate by more than 1e-6.
// ---------------------------------------------------------------------------

std::string write_tables(const SchemaTable& schema_table,
                         const ThetaTable& theta_table);
std::pair<SchemaTable, ThetaTable> read_tables(std::string_view text);

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

// Corpus-format rendering; complement marks are derived from internal-role
// theta events, so a marker is comparable with a gold tree by string
// equality.
std::string corpus_format(const CorpusNode& node);
std::string corpus_format(const ParseTree& tree);
std::string corpus_format(const PhraseMarker& marker);

// Linear probability with 12 significant digits ("%.12g").
std::string format_probability(double p);

}  // namespace probranch
