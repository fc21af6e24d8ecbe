#include "probranch/corpus.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace probranch {

namespace {

// -------------------------------------------------------------------------
// S-expression scanning
// -------------------------------------------------------------------------

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  // Skips whitespace and '#' line comments.
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() { return text_[pos_++]; }
  int line() const { return line_; }

  // Reads up to whitespace, '(' or ')'.
  std::string word() {
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')') {
        break;
      }
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

struct NodeHeader {
  Category category;
  Mark spec;
  Mark comp;
};

NodeHeader parse_header(const std::string& token, int line) {
  auto first = token.find(':');
  auto second = first == std::string::npos ? first : token.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos ||
      token.find(':', second + 1) != std::string::npos) {
    throw LoadError(line, "expected CAT:S:C node header, got '" + token + "'");
  }
  auto category = category_from_string(token.substr(0, first));
  if (!category) {
    throw LoadError(line,
                    "unknown category '" + token.substr(0, first) + "'");
  }
  std::string spec_part = token.substr(first + 1, second - first - 1);
  std::string comp_part = token.substr(second + 1);
  if (spec_part.size() != 1 || comp_part.size() != 1) {
    throw LoadError(line, "bad feature marks in '" + token + "'");
  }
  auto spec = mark_from_char(spec_part[0]);
  auto comp = mark_from_char(comp_part[0]);
  if (!spec || !comp) {
    throw LoadError(line, "feature marks must be '+' or '-' in '" + token +
                              "'");
  }
  return NodeHeader{*category, *spec, *comp};
}

std::unique_ptr<CorpusNode> parse_node(Scanner& scanner, bool allow_prefix) {
  scanner.skip_space();
  if (scanner.eof()) throw LoadError(scanner.line(), "unexpected end of input");

  bool head_marked = false;
  bool complement_marked = false;
  if (scanner.peek() == '^' || scanner.peek() == '+') {
    if (!allow_prefix) {
      throw LoadError(scanner.line(), "unexpected daughter prefix '" +
                                          std::string(1, scanner.peek()) +
                                          "' at top level");
    }
    head_marked = scanner.get() == '^';
    complement_marked = !head_marked;
  }
  if (scanner.eof() || scanner.peek() != '(') {
    throw LoadError(scanner.line(), "expected '('");
  }
  scanner.get();
  int line = scanner.line();
  scanner.skip_space();
  std::string header_token = scanner.word();
  if (header_token.empty()) {
    throw LoadError(scanner.line(), "missing node header");
  }
  NodeHeader header = parse_header(header_token, line);

  auto node = std::make_unique<CorpusNode>();
  node->category = header.category;
  node->spec = header.spec;
  node->comp = header.comp;
  node->head_marked = head_marked;
  node->complement_marked = complement_marked;
  node->line = line;

  scanner.skip_space();
  if (scanner.eof()) throw LoadError(scanner.line(), "unexpected end of input");

  if (scanner.peek() == '=') {
    scanner.get();
    node->word = scanner.word();
    if (node->word.empty()) {
      throw LoadError(scanner.line(), "leaf with empty word");
    }
    scanner.skip_space();
    if (scanner.eof() || scanner.peek() != ')') {
      throw LoadError(scanner.line(), "expected ')' after leaf word");
    }
    scanner.get();
    return node;
  }

  std::vector<std::unique_ptr<CorpusNode>> children;
  while (true) {
    scanner.skip_space();
    if (scanner.eof()) {
      throw LoadError(scanner.line(), "unexpected end of input");
    }
    if (scanner.peek() == ')') {
      scanner.get();
      break;
    }
    children.push_back(parse_node(scanner, true));
  }
  if (children.size() != 2) {
    throw LoadError(line, "internal node needs exactly two daughters, found " +
                              std::to_string(children.size()));
  }
  int heads = children[0]->head_marked + children[1]->head_marked;
  if (heads == 0) throw LoadError(line, "internal node has no head marker");
  if (heads == 2) {
    throw LoadError(line, "internal node has multiple head markers");
  }
  const CorpusNode& head =
      children[0]->head_marked ? *children[0] : *children[1];
  if (head.category != node->category) {
    throw LoadError(line, "head daughter category " +
                              std::string(to_string(head.category)) +
                              " differs from mother " +
                              std::string(to_string(node->category)));
  }
  node->left = std::move(children[0]);
  node->right = std::move(children[1]);
  return node;
}

}  // namespace

std::vector<CorpusTree> read_corpus(std::string_view text) {
  Scanner scanner(text);
  std::vector<CorpusTree> trees;
  while (true) {
    scanner.skip_space();
    if (scanner.eof()) break;
    trees.push_back(CorpusTree{parse_node(scanner, false)});
  }
  if (trees.empty()) throw LoadError(0, "empty corpus document");
  return trees;
}

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

namespace {

// Schema classification from the head/complement marks and feature marks.
// Mirrors the five schema shapes; zero matches is a data error.
int classify_branch(const CorpusNode& mother) {
  const CorpusNode& left = *mother.left;
  const CorpusNode& right = *mother.right;
  const CorpusNode& head = left.head_marked ? left : right;
  const CorpusNode& other = left.head_marked ? right : left;
  const bool head_is_left = left.head_marked;

  if (head.category == other.category) return 0;

  const bool other_maximal =
      other.spec == Mark::Minus && other.comp == Mark::Minus;

  if (!head_is_left) {
    // (1) specifier: Y(-,-) . H:X(+,-) -> X(-,-)
    if (!other.complement_marked && other_maximal && head.spec == Mark::Plus &&
        head.comp == Mark::Minus && mother.spec == Mark::Minus &&
        mother.comp == Mark::Minus) {
      return 1;
    }
    // (5) left adjunct: Y(-,-) . H:X(S,-) -> X(S,-)
    if (!other.complement_marked && other_maximal &&
        head.comp == Mark::Minus && mother.spec == head.spec &&
        mother.comp == Mark::Minus) {
      return 5;
    }
    return 0;
  }
  // (2) non-final complement: H:X(S,+) . Y(s,-) -> X(S,+)
  if (other.complement_marked && other.comp == Mark::Minus &&
      head.comp == Mark::Plus && mother.spec == head.spec &&
      mother.comp == Mark::Plus) {
    return 2;
  }
  // (3) final complement: H:X(S,+) . Y(-,-) -> X(S,-)
  if (other.complement_marked && other_maximal && head.comp == Mark::Plus &&
      mother.spec == head.spec && mother.comp == Mark::Minus) {
    return 3;
  }
  // (4) right adjunct: H:X(S,-) . Y(-,-) -> X(S,-)
  if (!other.complement_marked && other_maximal && head.comp == Mark::Minus &&
      mother.spec == head.spec && mother.comp == Mark::Minus) {
    return 4;
  }
  return 0;
}

void build_parent_map(const CorpusNode& node,
                      std::map<const CorpusNode*, const CorpusNode*>* parents) {
  if (node.is_leaf()) return;
  (*parents)[node.left.get()] = &node;
  (*parents)[node.right.get()] = &node;
  build_parent_map(*node.left, parents);
  build_parent_map(*node.right, parents);
}

std::string projection_identity(
    const CorpusNode* leaf,
    const std::map<const CorpusNode*, const CorpusNode*>& parents) {
  std::string identity;
  const CorpusNode* child = leaf;
  while (child->head_marked) {
    auto it = parents.find(child);
    if (it == parents.end()) break;
    const CorpusNode* parent = it->second;
    const CorpusNode* sibling = parent->left.get() == child
                                    ? parent->right.get()
                                    : parent->left.get();
    if (sibling->complement_marked) {
      if (!identity.empty()) identity += ',';
      identity += to_string(sibling->category);
    }
    child = parent;
  }
  return identity.empty() ? "-" : identity;
}

void walk_counts(const CorpusNode& node,
                 const std::map<const CorpusNode*, const CorpusNode*>& parents,
                 CountBundle* bundle) {
  if (node.is_leaf()) {
    if (node.category == Category::V) {
      bundle->theta_observations.emplace_back(
          node.word, projection_identity(&node, parents));
    }
    return;
  }
  int schema = classify_branch(node);
  if (schema == 0) {
    throw UnclassifiableBranchError(
        "line " + std::to_string(node.line) +
        ": node fits no schema: " + corpus_format(node));
  }
  bundle->schema_counts[schema] += 1;
  walk_counts(*node.left, parents, bundle);
  walk_counts(*node.right, parents, bundle);
}

}  // namespace

long long CountBundle::total_branches() const {
  long long total = 0;
  for (const auto& [schema, count] : schema_counts) total += count;
  return total;
}

CountBundle extract_counts(const std::vector<CorpusTree>& trees) {
  if (trees.empty()) throw EmptyCorpusError("no trees to count");
  CountBundle bundle;
  bundle.tree_count = static_cast<long long>(trees.size());
  for (const CorpusTree& tree : trees) {
    std::map<const CorpusNode*, const CorpusNode*> parents;
    build_parent_map(*tree.root, &parents);
    walk_counts(*tree.root, parents, &bundle);
  }
  return bundle;
}

// ---------------------------------------------------------------------------
// Lexicon file
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t at = text.find(sep, start);
    if (at == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, at - start));
    start = at + 1;
  }
}

ThetaRole parse_role_term(const std::string& term, int line) {
  auto slash = term.find('/');
  auto colon = term.find(':', slash == std::string::npos ? 0 : slash + 1);
  if (slash == std::string::npos || colon == std::string::npos) {
    throw LoadError(line, "expected label/position:category, got '" + term +
                              "'");
  }
  auto label = role_label_from_string(term.substr(0, slash));
  if (!label) {
    throw LoadError(line, "unknown role label '" + term.substr(0, slash) +
                              "'");
  }
  std::string pos = term.substr(slash + 1, colon - slash - 1);
  RolePosition position;
  if (pos == "ext") {
    position = RolePosition::External;
  } else if (pos == "int") {
    position = RolePosition::Internal;
  } else {
    throw LoadError(line, "role position must be ext or int, got '" + pos +
                              "'");
  }
  auto selects = category_from_string(term.substr(colon + 1));
  if (!selects) {
    throw LoadError(line, "unknown category '" + term.substr(colon + 1) +
                              "'");
  }
  return ThetaRole{*label, position, *selects};
}

ThetaGrid parse_grid(const std::string& field, long long count, int line) {
  ThetaGrid grid;
  grid.count = count;
  if (field == "-" || field.empty()) return grid;
  bool saw_external = false;
  for (const std::string& term : split(field, ';')) {
    ThetaRole role = parse_role_term(term, line);
    if (role.position == RolePosition::External) {
      if (saw_external) {
        throw LoadError(line, "grid has more than one external role");
      }
      saw_external = true;
    }
    grid.roles.push_back(role);
  }
  return grid;
}

}  // namespace

Lexicon read_lexicon(std::string_view text) {
  struct PendingEntry {
    LexicalEntry entry;
    int first_line;
  };
  std::vector<PendingEntry> pending;  // insertion order
  std::map<std::pair<std::string, Category>, std::size_t> slot_of;

  int line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t eol = text.find('\n', start);
    std::string row(text.substr(
        start, eol == std::string_view::npos ? eol : eol - start));
    start = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line;
    if (row.empty() || row[0] == '#') continue;

    std::vector<std::string> fields = split(row, '\t');
    if (fields.size() != 4 && fields.size() != 5) {
      throw LoadError(line, "expected 4 or 5 tab-separated fields, got " +
                                std::to_string(fields.size()));
    }
    const std::string& word = fields[0];
    if (word.empty() || word.find(' ') != std::string::npos) {
      throw LoadError(line, "bad word '" + word + "'");
    }
    auto category = category_from_string(fields[1]);
    if (!category) {
      throw LoadError(line, "unknown category '" + fields[1] + "'");
    }
    if (fields[2].size() != 1 || !mark_from_char(fields[2][0])) {
      throw LoadError(line, "spec mark must be '+' or '-'");
    }
    Mark spec = *mark_from_char(fields[2][0]);
    long long count = 1;
    if (fields.size() == 5) {
      try {
        count = std::stoll(fields[4]);
      } catch (const std::exception&) {
        throw LoadError(line, "bad count '" + fields[4] + "'");
      }
      if (count < 0) throw LoadError(line, "negative count");
    }
    ThetaGrid grid = parse_grid(fields[3], count, line);

    auto key = std::make_pair(word, *category);
    auto it = slot_of.find(key);
    if (it == slot_of.end()) {
      pending.push_back(PendingEntry{
          LexicalEntry{word, *category, spec, {std::move(grid)}}, line});
      slot_of[key] = pending.size() - 1;
      continue;
    }
    PendingEntry& slot = pending[it->second];
    if (slot.entry.spec_required != spec) {
      throw LoadError(line, "conflicting spec mark for (" + word + ", " +
                                std::string(to_string(*category)) + ")");
    }
    for (const ThetaGrid& existing : slot.entry.grids) {
      if (existing.same_roles(grid)) {
        throw LoadError(line, "duplicate (word, category, grid) record for '" +
                                  word + "'");
      }
    }
    slot.entry.grids.push_back(std::move(grid));
  }

  if (pending.empty()) throw LoadError(0, "empty lexicon");
  Lexicon lexicon;
  for (PendingEntry& p : pending) {
    lexicon.add(p.entry, p.first_line);
  }
  return lexicon;
}

std::string write_lexicon(const Lexicon& lexicon) {
  std::string out;
  for (const LexicalEntry& entry : lexicon.entries()) {
    for (const ThetaGrid& grid : entry.grids) {
      out += entry.word;
      out += '\t';
      out += to_string(entry.category);
      out += '\t';
      out += to_char(entry.spec_required);
      out += '\t';
      out += grid.role_text();
      out += '\t';
      out += std::to_string(grid.count);
      out += '\n';
    }
  }
  return out;
}

void validate_against_lexicon(const std::vector<CorpusTree>& trees,
                              const Lexicon& lexicon) {
  for (const CorpusTree& tree : trees) {
    std::map<const CorpusNode*, const CorpusNode*> parents;
    build_parent_map(*tree.root, &parents);
    // Collect leaves in order.
    std::vector<const CorpusNode*> stack{tree.root.get()};
    while (!stack.empty()) {
      const CorpusNode* node = stack.back();
      stack.pop_back();
      if (!node->is_leaf()) {
        stack.push_back(node->right.get());
        stack.push_back(node->left.get());
        continue;
      }
      const auto* entries = lexicon.find(node->word);
      if (!entries) {
        throw LoadError(node->line,
                        "corpus word '" + node->word + "' not in lexicon");
      }
      const LexicalEntry* entry = nullptr;
      for (const LexicalEntry* candidate : *entries) {
        if (candidate->category == node->category) entry = candidate;
      }
      if (!entry) {
        throw LoadError(node->line, "no " +
                                        std::string(to_string(node->category)) +
                                        " entry for corpus word '" +
                                        node->word + "'");
      }
      if (entry->spec_required != node->spec) {
        throw LoadError(node->line, "spec mark of corpus leaf '" + node->word +
                                        "' disagrees with the lexicon");
      }
      std::string identity = projection_identity(node, parents);
      bool found = false;
      for (const ThetaGrid& grid : entry->grids) {
        if (grid.identity() == identity) found = true;
      }
      if (!found) {
        throw LoadError(node->line, "leaf '" + node->word +
                                        "' discharges " + identity +
                                        " but no lexicon grid matches");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Table file
// ---------------------------------------------------------------------------

std::string format_probability(double p) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", p);
  return buffer;
}

std::string write_tables(const SchemaTable& schema_table,
                         const ThetaTable& theta_table) {
  std::string out = "probranch-tables 1 ";
  out += to_string(schema_table.mode);
  out += ' ';
  out += format_probability(theta_table.default_probability);
  out += '\n';
  for (int id = 1; id <= 5; ++id) {
    out += "schema " + std::to_string(id) + ' ' +
           std::to_string(schema_table.counts[id - 1]) + ' ' +
           format_probability(schema_table.probability(id)) + '\n';
  }
  for (const auto& [word, grids] : theta_table.heads) {
    for (const auto& [identity, stat] : grids) {
      out += "theta " + word + ' ' + identity + ' ' +
             std::to_string(stat.count) + ' ' +
             format_probability(stat.probability) + '\n';
    }
  }
  return out;
}

std::pair<SchemaTable, ThetaTable> read_tables(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  if (!std::getline(in, header)) throw LoadError(0, "empty tables file");
  std::istringstream head(header);
  std::string magic, version, mode_token;
  double default_probability = 0.0;
  if (!(head >> magic >> version >> mode_token >> default_probability) ||
      magic != "probranch-tables") {
    throw LoadError(1, "not a probranch tables file");
  }
  if (version != "1") {
    throw LoadError(1, "unsupported tables version '" + version + "'");
  }
  auto mode = conditioning_from_string(mode_token);
  if (!mode) throw LoadError(1, "unknown conditioning '" + mode_token + "'");
  if (!(default_probability > 0.0) || default_probability > 1.0) {
    throw LoadError(1, "theta default probability must be in (0,1]");
  }

  std::map<int, long long> schema_counts;
  std::map<int, double> schema_file_probs;
  std::map<int, int> schema_lines;
  struct ThetaRow {
    long long count;
    double probability;
    int line;
  };
  std::map<std::string, std::map<std::string, ThetaRow>> theta_rows;

  std::string row;
  int line = 1;
  while (std::getline(in, row)) {
    ++line;
    if (row.empty() || row[0] == '#') continue;
    std::istringstream fields(row);
    std::string kind;
    fields >> kind;
    if (kind == "schema") {
      int id;
      long long count;
      double probability;
      if (!(fields >> id >> count >> probability) || id < 1 || id > 5 ||
          count < 0) {
        throw LoadError(line, "bad schema row");
      }
      if (schema_counts.count(id)) {
        throw LoadError(line, "duplicate schema " + std::to_string(id));
      }
      schema_counts[id] = count;
      schema_file_probs[id] = probability;
      schema_lines[id] = line;
    } else if (kind == "theta") {
      std::string word, identity;
      long long count;
      double probability;
      if (!(fields >> word >> identity >> count >> probability) || count <= 0) {
        throw LoadError(line, "bad theta row");
      }
      if (theta_rows[word].count(identity)) {
        throw LoadError(line, "duplicate theta row for (" + word + ", " +
                                  identity + ")");
      }
      theta_rows[word][identity] = ThetaRow{count, probability, line};
    } else {
      throw LoadError(line, "unknown row kind '" + kind + "'");
    }
  }
  if (schema_counts.size() != 5) {
    throw LoadError(0, "expected five schema rows, found " +
                           std::to_string(schema_counts.size()));
  }

  // Probabilities are re-derived from the counts; the serialized values must
  // agree within 1e-6 or the file was hand-edited inconsistently.
  SchemaTable schema_table = (*mode == Conditioning::Flat)
                                 ? estimate_flat(schema_counts)
                                 : estimate_mother_conditioned(schema_counts);
  for (int id = 1; id <= 5; ++id) {
    double delta =
        std::fabs(schema_table.probability(id) - schema_file_probs[id]);
    if (delta > 1e-6) {
      throw LoadError(schema_lines[id],
                      "schema " + std::to_string(id) +
                          " probability deviates from its counts (table not "
                          "normalized)");
    }
  }

  ThetaTable theta_table;
  theta_table.default_probability = default_probability;
  for (const auto& [word, rows] : theta_rows) {
    long long total = 0;
    for (const auto& [identity, r] : rows) total += r.count;
    for (const auto& [identity, r] : rows) {
      double probability =
          static_cast<double>(r.count) / static_cast<double>(total);
      if (std::fabs(probability - r.probability) > 1e-6) {
        throw LoadError(r.line, "theta probability for (" + word + ", " +
                                    identity +
                                    ") deviates from its counts (table not "
                                    "normalized)");
      }
      theta_table.heads[word][identity] = GridStat{r.count, probability};
    }
  }
  return {schema_table, theta_table};
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

void render_corpus_node(const CorpusNode& node, bool with_mark,
                        std::string* out) {
  if (with_mark) {
    if (node.head_marked) *out += '^';
    if (node.complement_marked) *out += '+';
  }
  *out += '(';
  *out += to_string(node.category);
  *out += ':';
  *out += to_char(node.spec);
  *out += ':';
  *out += to_char(node.comp);
  *out += ' ';
  if (node.is_leaf()) {
    *out += '=';
    *out += node.word;
  } else {
    render_corpus_node(*node.left, true, out);
    *out += ' ';
    render_corpus_node(*node.right, true, out);
  }
  *out += ')';
}

void render_parse_tree(const ParseTree& tree, const char* mark,
                       std::string* out) {
  *out += mark;
  const SyntacticNode& n = tree.node;
  *out += '(';
  *out += to_string(n.category);
  *out += ':';
  *out += to_char(n.spec);
  *out += ':';
  *out += to_char(n.comp);
  *out += ' ';
  if (tree.is_leaf()) {
    *out += '=';
    *out += n.head_word;
  } else {
    Side head = head_side(tree.schema_id);
    bool complement_left = false;
    bool complement_right = false;
    if (tree.theta_event &&
        tree.theta_event->role.position == RolePosition::Internal) {
      complement_left = tree.theta_event->receiver == Side::Left;
      complement_right = tree.theta_event->receiver == Side::Right;
    }
    render_parse_tree(*tree.left,
                      head == Side::Left ? "^" : (complement_left ? "+" : ""),
                      out);
    *out += ' ';
    render_parse_tree(*tree.right,
                      head == Side::Right ? "^" : (complement_right ? "+" : ""),
                      out);
  }
  *out += ')';
}

}  // namespace

std::string corpus_format(const CorpusNode& node) {
  std::string out;
  render_corpus_node(node, false, &out);
  return out;
}

std::string corpus_format(const ParseTree& tree) {
  std::string out;
  render_parse_tree(tree, "", &out);
  return out;
}

std::string corpus_format(const PhraseMarker& marker) {
  return corpus_format(marker.tree());
}

}  // namespace probranch
