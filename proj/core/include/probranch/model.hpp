#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "probranch/errors.hpp"

namespace probranch {

// ---------------------------------------------------------------------------
// Categories and features
// ---------------------------------------------------------------------------

enum class Category : std::uint8_t { N, V, P, A, Adv, Det, I, C };

inline constexpr std::array<Category, 8> kAllCategories = {
    Category::N, Category::V,   Category::P, Category::A,
    Category::Adv, Category::Det, Category::I, Category::C};

std::string_view to_string(Category c);
std::optional<Category> category_from_string(std::string_view s);

// Binary feature mark. Plus on SPEC: the head still requires a specifier.
// Plus on COMP: the head's grid still has undischarged internal roles.
enum class Mark : std::uint8_t { Plus, Minus };

char to_char(Mark m);
std::optional<Mark> mark_from_char(char c);

// ---------------------------------------------------------------------------
// Theta grids and the lexicon
// ---------------------------------------------------------------------------

enum class RoleLabel : std::uint8_t {
  Agent, Theme, Goal, Proposition, Location, Instrument
};
enum class RolePosition : std::uint8_t { External, Internal };

std::string_view to_string(RoleLabel l);
std::optional<RoleLabel> role_label_from_string(std::string_view s);
std::string_view to_string(RolePosition p);

struct ThetaRole {
  RoleLabel label;
  RolePosition position;
  Category selects;  // category of the argument's maximal projection

  bool operator==(const ThetaRole&) const = default;
  std::string to_text() const;  // "agent/ext:N"
};

// An ordered argument-structure record. Internal roles are discharged in
// sequence order; a grid holds at most one external role.
struct ThetaGrid {
  std::vector<ThetaRole> roles;
  long long count = 0;  // corpus/lexicon occurrence count

  int internal_count() const;
  bool has_external() const;
  const ThetaRole* external_role() const;
  // i-th internal role in sequence order (0-based); nullptr out of range.
  const ThetaRole* internal_role(int i) const;

  // Grid identity used for theta-table keys: the ordered internal-role
  // categories, "N,P" style; "-" for the empty sequence.
  std::string identity() const;
  // Full role spelling, "agent/ext:N;theme/int:N"; "-" when empty.
  std::string role_text() const;

  bool same_roles(const ThetaGrid& other) const { return roles == other.roles; }
  bool operator==(const ThetaGrid&) const = default;
};

struct LexicalEntry {
  std::string word;
  Category category;
  Mark spec_required;
  std::vector<ThetaGrid> grids;  // nonempty; a zero-argument word has one empty grid
};

// Word -> entries index with stable entry addresses. At most one entry per
// (word, category); grids of one entry are distinct as role sequences.
class Lexicon {
 public:
  // Returns the stored entry. Throws LoadError on a duplicate
  // (word, category, grid) or a conflicting spec mark, attributing `line`.
  const LexicalEntry& add(const LexicalEntry& entry, int line = 0);

  const std::vector<const LexicalEntry*>* find(const std::string& word) const;
  bool contains(const std::string& word) const;
  std::size_t entry_count() const { return storage_.size(); }
  // Entries in insertion order.
  const std::deque<LexicalEntry>& entries() const { return storage_; }

 private:
  std::deque<LexicalEntry> storage_;
  std::map<std::string, std::vector<const LexicalEntry*>> index_;
};

// ---------------------------------------------------------------------------
// Nodes
// ---------------------------------------------------------------------------

// Half-open token interval.
struct Span {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool contains(const Span& other) const {
    return begin <= other.begin && other.end <= end;
  }
  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

enum class CaseValue : std::uint8_t { None, Nominative, Accusative, Oblique };

std::string_view to_string(CaseValue v);

// A (possibly partial) projection. Immutable by convention: every update
// constructs a new node so the engine can share subtrees across parses.
struct SyntacticNode {
  Category category = Category::N;
  Mark spec = Mark::Minus;
  Mark comp = Mark::Minus;
  std::string head_word;
  int head_index = 0;                       // token index of the head leaf
  const LexicalEntry* head_entry = nullptr; // non-owning, lexicon outlives nodes
  int grid_index = 0;                       // selected grid within head_entry
  int remaining_internal = 0;
  bool external_pending = false;
  std::optional<ThetaRole> assigned_role;
  CaseValue case_mark = CaseValue::None;
  Span span;

  const ThetaGrid& selected_grid() const;
  // Next undischarged internal role in grid order; nullptr when none remain.
  const ThetaRole* next_internal_role() const;
  bool is_maximal() const {
    return spec == Mark::Minus && comp == Mark::Minus;
  }

  bool operator==(const SyntacticNode&) const = default;
};

// Builds the leaf projection of `entry` with `grid` selected, spanning
// [position, position+1). The grid must be one of the entry's own.
SyntacticNode leaf_node(const LexicalEntry& entry, const ThetaGrid& grid,
                        int position);

// Copy with updated spec/comp/span; grid state is untouched.
// new_span must contain node.span.
SyntacticNode project(const SyntacticNode& node, Mark new_spec, Mark new_comp,
                      Span new_span);

SyntacticNode with_role(SyntacticNode node, const ThetaRole& role);
SyntacticNode with_case(SyntacticNode node, CaseValue value);

// ---------------------------------------------------------------------------
// Branches and phrase markers
// ---------------------------------------------------------------------------

enum class Side : std::uint8_t { Left, Right };

// Which daughter projects per schema (index 0 = schema 1).
inline constexpr std::array<Side, 5> kHeadSide = {
    Side::Right, Side::Left, Side::Left, Side::Left, Side::Right};

inline Side head_side(int schema_id) { return kHeadSide[schema_id - 1]; }
inline Side other_side(Side s) {
  return s == Side::Left ? Side::Right : Side::Left;
}

struct ThetaEvent {
  ThetaRole role;
  Side receiver;       // daughter that received the role
  int licenser_index;  // token index of the licensing head

  bool operator==(const ThetaEvent&) const = default;
};

struct CaseEvent {
  CaseValue value;
  Side receiver;
  int assigner_index;

  bool operator==(const CaseEvent&) const = default;
};

// A licensed local tree: schema_id == 0 marks a leaf, otherwise the node is
// the mother of a proper branch and left/right are its daughters.
struct ParseTree {
  SyntacticNode node;
  int schema_id = 0;
  std::shared_ptr<const ParseTree> left;
  std::shared_ptr<const ParseTree> right;
  std::optional<ThetaEvent> theta_event;
  std::optional<CaseEvent> case_event;

  bool is_leaf() const { return schema_id == 0; }
  const ParseTree& head_daughter() const;
  const ParseTree& nonhead_daughter() const;
};

using TreePtr = std::shared_ptr<const ParseTree>;

TreePtr make_leaf(SyntacticNode node);
TreePtr make_branch(SyntacticNode mother, int schema_id, TreePtr left,
                    TreePtr right, std::optional<ThetaEvent> theta_event,
                    std::optional<CaseEvent> case_event);

// A complete binary tree of proper branches over a sentence.
class PhraseMarker {
 public:
  PhraseMarker() = default;
  explicit PhraseMarker(TreePtr root);

  const ParseTree& tree() const { return *root_; }
  const TreePtr& tree_ptr() const { return root_; }
  const SyntacticNode& root() const { return root_->node; }

  // Internal nodes in preorder (empty for a one-word sentence).
  std::vector<const ParseTree*> branches() const;
  std::vector<const ParseTree*> leaves() const;
  int token_count() const { return root_->node.span.size(); }

  // Canonical serialization that distinguishes any two distinct markers
  // (schema ids, grid selections, theta/case events included). Used for
  // deterministic ordering and tie-breaking.
  std::string detail_string() const;

 private:
  TreePtr root_;
};

std::string detail_string(const ParseTree& tree);

// Structural checks used by tests and debug builds: span algebra, tree
// shape, head projection, comp/remaining consistency. Throws std::logic_error
// with a description of the first violation.
void validate_marker(const PhraseMarker& marker);

}  // namespace probranch
