#include "probranch/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace probranch {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::N: return "N";
    case Category::V: return "V";
    case Category::P: return "P";
    case Category::A: return "A";
    case Category::Adv: return "Adv";
    case Category::Det: return "Det";
    case Category::I: return "I";
    case Category::C: return "C";
  }
  return "?";
}

std::optional<Category> category_from_string(std::string_view s) {
  for (Category c : kAllCategories) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

char to_char(Mark m) { return m == Mark::Plus ? '+' : '-'; }

std::optional<Mark> mark_from_char(char c) {
  if (c == '+') return Mark::Plus;
  if (c == '-') return Mark::Minus;
  return std::nullopt;
}

std::string_view to_string(RoleLabel l) {
  switch (l) {
    case RoleLabel::Agent: return "agent";
    case RoleLabel::Theme: return "theme";
    case RoleLabel::Goal: return "goal";
    case RoleLabel::Proposition: return "proposition";
    case RoleLabel::Location: return "location";
    case RoleLabel::Instrument: return "instrument";
  }
  return "?";
}

std::optional<RoleLabel> role_label_from_string(std::string_view s) {
  for (RoleLabel l : {RoleLabel::Agent, RoleLabel::Theme, RoleLabel::Goal,
                      RoleLabel::Proposition, RoleLabel::Location,
                      RoleLabel::Instrument}) {
    if (to_string(l) == s) return l;
  }
  return std::nullopt;
}

std::string_view to_string(RolePosition p) {
  return p == RolePosition::External ? "ext" : "int";
}

std::string_view to_string(CaseValue v) {
  switch (v) {
    case CaseValue::None: return "none";
    case CaseValue::Nominative: return "nominative";
    case CaseValue::Accusative: return "accusative";
    case CaseValue::Oblique: return "oblique";
  }
  return "?";
}

std::string ThetaRole::to_text() const {
  std::string out{to_string(label)};
  out += '/';
  out += to_string(position);
  out += ':';
  out += to_string(selects);
  return out;
}

int ThetaGrid::internal_count() const {
  return static_cast<int>(std::count_if(
      roles.begin(), roles.end(),
      [](const ThetaRole& r) { return r.position == RolePosition::Internal; }));
}

bool ThetaGrid::has_external() const { return external_role() != nullptr; }

const ThetaRole* ThetaGrid::external_role() const {
  for (const ThetaRole& r : roles) {
    if (r.position == RolePosition::External) return &r;
  }
  return nullptr;
}

const ThetaRole* ThetaGrid::internal_role(int i) const {
  int seen = 0;
  for (const ThetaRole& r : roles) {
    if (r.position != RolePosition::Internal) continue;
    if (seen == i) return &r;
    ++seen;
  }
  return nullptr;
}

std::string ThetaGrid::identity() const {
  std::string out;
  for (const ThetaRole& r : roles) {
    if (r.position != RolePosition::Internal) continue;
    if (!out.empty()) out += ',';
    out += to_string(r.selects);
  }
  return out.empty() ? "-" : out;
}

std::string ThetaGrid::role_text() const {
  std::string out;
  for (const ThetaRole& r : roles) {
    if (!out.empty()) out += ';';
    out += r.to_text();
  }
  return out.empty() ? "-" : out;
}

const LexicalEntry& Lexicon::add(const LexicalEntry& entry, int line) {
  if (entry.grids.empty()) {
    throw LoadError(line, "entry '" + entry.word + "' has no grids");
  }
  auto& slots = index_[entry.word];
  for (const LexicalEntry* existing : slots) {
    if (existing->category != entry.category) continue;
    throw LoadError(line, "duplicate entry for (" + entry.word + ", " +
                              std::string(to_string(entry.category)) + ")");
  }
  storage_.push_back(entry);
  slots.push_back(&storage_.back());
  return storage_.back();
}

const std::vector<const LexicalEntry*>* Lexicon::find(
    const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? nullptr : &it->second;
}

bool Lexicon::contains(const std::string& word) const {
  return index_.count(word) > 0;
}

const ThetaGrid& SyntacticNode::selected_grid() const {
  if (!head_entry || grid_index < 0 ||
      grid_index >= static_cast<int>(head_entry->grids.size())) {
    throw InvalidGridError("node has no valid grid selection");
  }
  return head_entry->grids[grid_index];
}

const ThetaRole* SyntacticNode::next_internal_role() const {
  const ThetaGrid& grid = selected_grid();
  if (remaining_internal <= 0) return nullptr;
  int discharged = grid.internal_count() - remaining_internal;
  return grid.internal_role(discharged);
}

SyntacticNode leaf_node(const LexicalEntry& entry, const ThetaGrid& grid,
                        int position) {
  const ThetaGrid* base = entry.grids.data();
  const ThetaGrid* end = base + entry.grids.size();
  if (&grid < base || &grid >= end) {
    throw InvalidGridError("grid does not belong to entry '" + entry.word +
                           "'");
  }
  if (position < 0) {
    throw SpanError("negative token position");
  }
  int internals = grid.internal_count();
  SyntacticNode node;
  node.category = entry.category;
  node.spec = entry.spec_required;
  node.comp = internals > 0 ? Mark::Plus : Mark::Minus;
  node.head_word = entry.word;
  node.head_index = position;
  node.head_entry = &entry;
  node.grid_index = static_cast<int>(&grid - base);
  node.remaining_internal = internals;
  node.external_pending = grid.has_external();
  node.span = Span{position, position + 1};
  return node;
}

SyntacticNode project(const SyntacticNode& node, Mark new_spec, Mark new_comp,
                      Span new_span) {
  if (!new_span.contains(node.span)) {
    std::ostringstream msg;
    msg << "projection span [" << new_span.begin << "," << new_span.end
        << ") does not contain [" << node.span.begin << "," << node.span.end
        << ")";
    throw SpanError(msg.str());
  }
  SyntacticNode out = node;
  out.spec = new_spec;
  out.comp = new_comp;
  out.span = new_span;
  return out;
}

SyntacticNode with_role(SyntacticNode node, const ThetaRole& role) {
  node.assigned_role = role;
  return node;
}

SyntacticNode with_case(SyntacticNode node, CaseValue value) {
  node.case_mark = value;
  return node;
}

const ParseTree& ParseTree::head_daughter() const {
  return head_side(schema_id) == Side::Left ? *left : *right;
}

const ParseTree& ParseTree::nonhead_daughter() const {
  return head_side(schema_id) == Side::Left ? *right : *left;
}

TreePtr make_leaf(SyntacticNode node) {
  auto tree = std::make_shared<ParseTree>();
  tree->node = std::move(node);
  return tree;
}

TreePtr make_branch(SyntacticNode mother, int schema_id, TreePtr left,
                    TreePtr right, std::optional<ThetaEvent> theta_event,
                    std::optional<CaseEvent> case_event) {
  if (schema_id < 1 || schema_id > 5 || !left || !right) {
    throw std::logic_error("malformed proper branch");
  }
  if (left->node.span.end != right->node.span.begin ||
      mother.span != Span{left->node.span.begin, right->node.span.end}) {
    throw SpanError("branch spans do not concatenate");
  }
  auto tree = std::make_shared<ParseTree>();
  tree->node = std::move(mother);
  tree->schema_id = schema_id;
  tree->left = std::move(left);
  tree->right = std::move(right);
  tree->theta_event = theta_event;
  tree->case_event = case_event;
  return tree;
}

PhraseMarker::PhraseMarker(TreePtr root) : root_(std::move(root)) {
  if (!root_) throw std::logic_error("null phrase marker");
}

namespace {

void collect(const ParseTree& tree, std::vector<const ParseTree*>* internals,
             std::vector<const ParseTree*>* leaves) {
  if (tree.is_leaf()) {
    if (leaves) leaves->push_back(&tree);
    return;
  }
  if (internals) internals->push_back(&tree);
  collect(*tree.left, internals, leaves);
  collect(*tree.right, internals, leaves);
}

void detail_render(const ParseTree& tree, std::string* out) {
  const SyntacticNode& n = tree.node;
  *out += '(';
  if (tree.is_leaf()) {
    *out += '=';
    *out += n.head_word;
    *out += ' ';
    *out += to_string(n.category);
    *out += ':';
    *out += to_char(n.spec);
    *out += ':';
    *out += to_char(n.comp);
    *out += " g=";
    *out += n.selected_grid().role_text();
  } else {
    *out += 's';
    *out += std::to_string(tree.schema_id);
    *out += ' ';
    *out += to_string(n.category);
    *out += ':';
    *out += to_char(n.spec);
    *out += ':';
    *out += to_char(n.comp);
    if (tree.theta_event) {
      *out += " t=";
      *out += tree.theta_event->role.to_text();
      *out += tree.theta_event->receiver == Side::Left ? ">L" : ">R";
    }
    if (tree.case_event) {
      *out += " c=";
      *out += to_string(tree.case_event->value);
      *out += tree.case_event->receiver == Side::Left ? ">L" : ">R";
    }
    *out += ' ';
    detail_render(*tree.left, out);
    *out += ' ';
    detail_render(*tree.right, out);
  }
  *out += ')';
}

}  // namespace

std::vector<const ParseTree*> PhraseMarker::branches() const {
  std::vector<const ParseTree*> out;
  collect(*root_, &out, nullptr);
  return out;
}

std::vector<const ParseTree*> PhraseMarker::leaves() const {
  std::vector<const ParseTree*> out;
  collect(*root_, nullptr, &out);
  return out;
}

std::string detail_string(const ParseTree& tree) {
  std::string out;
  detail_render(tree, &out);
  return out;
}

std::string PhraseMarker::detail_string() const {
  return probranch::detail_string(*root_);
}

namespace {

void validate_tree(const ParseTree& tree) {
  const SyntacticNode& n = tree.node;
  if ((n.comp == Mark::Plus) != (n.remaining_internal > 0)) {
    throw std::logic_error("comp mark inconsistent with remaining roles");
  }
  if (n.span.size() <= 0) throw std::logic_error("empty node span");
  if (tree.is_leaf()) {
    if (tree.left || tree.right) throw std::logic_error("leaf with daughters");
    if (n.span.size() != 1) throw std::logic_error("leaf span not unit");
    return;
  }
  if (!tree.left || !tree.right) {
    throw std::logic_error("branch missing a daughter");
  }
  if (tree.schema_id < 1 || tree.schema_id > 5) {
    throw std::logic_error("schema id out of range");
  }
  const Span& ls = tree.left->node.span;
  const Span& rs = tree.right->node.span;
  if (ls.end != rs.begin) throw std::logic_error("daughter spans not adjacent");
  if (n.span != Span{ls.begin, rs.end}) {
    throw std::logic_error("mother span is not the daughters' concatenation");
  }
  const SyntacticNode& head = tree.head_daughter().node;
  if (head.category != n.category || head.head_index != n.head_index) {
    throw std::logic_error("mother does not project its head daughter");
  }
  if (tree.theta_event &&
      tree.theta_event->receiver == head_side(tree.schema_id)) {
    throw std::logic_error("theta event targets the head daughter");
  }
  validate_tree(*tree.left);
  validate_tree(*tree.right);
}

}  // namespace

void validate_marker(const PhraseMarker& marker) {
  validate_tree(marker.tree());
  int tokens = marker.token_count();
  auto leaves = marker.leaves();
  if (static_cast<int>(leaves.size()) != tokens) {
    throw std::logic_error("leaf count does not match token count");
  }
  auto branches = marker.branches();
  if (static_cast<int>(branches.size()) != tokens - 1) {
    throw std::logic_error("branch count is not token count - 1");
  }
  int expected = marker.root().span.begin;
  for (const ParseTree* leaf : leaves) {
    if (leaf->node.span.begin != expected) {
      throw std::logic_error("leaves do not tile the sentence span");
    }
    expected = leaf->node.span.end;
  }
}

}  // namespace probranch
