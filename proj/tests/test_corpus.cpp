#include "doctest.h"

#include <map>

#include "probranch/corpus.hpp"
#include "probranch/engine.hpp"
#include "test_util.hpp"

using namespace probranch;
using namespace testutil;

TEST_CASE("read_corpus: fixture loads and validates") {
  auto trees = fixture_corpus();
  CHECK(trees.size() == 30);
  for (const CorpusTree& t : trees) {
    CHECK(t.root != nullptr);
    CHECK_FALSE(t.root->head_marked);
  }
}

TEST_CASE("read_corpus: malformed inputs carry line numbers") {
  CHECK_THROWS_AS(read_corpus(""), LoadError);
  CHECK_THROWS_AS(read_corpus("# only comments\n"), LoadError);

  // Arity: internal node with one daughter.
  try {
    read_corpus("(N:-:-\n ^(N:+:- =dog))");
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find("two daughters") != std::string::npos);
  }

  // Unknown category.
  CHECK_THROWS_AS(read_corpus("(NP:-:- =dog)"), LoadError);
  // Bad feature mark.
  CHECK_THROWS_AS(read_corpus("(N:?:- =dog)"), LoadError);
  // Missing head marker.
  CHECK_THROWS_AS(read_corpus("(N:-:- (Det:-:- =the) (N:+:- =dog))"),
                  LoadError);
  // Two head markers.
  CHECK_THROWS_AS(read_corpus("(N:-:- ^(N:-:- =dogs) ^(N:+:- =dog))"),
                  LoadError);
  // Head category differs from mother.
  CHECK_THROWS_AS(read_corpus("(N:-:- (Det:-:- =the) ^(V:+:- =dog))"),
                  LoadError);
  // Prefix at top level.
  CHECK_THROWS_AS(read_corpus("^(N:-:- =dogs)"), LoadError);
}

TEST_CASE("extract_counts: single-branch classification") {
  auto trees = read_corpus("(N:-:- (Det:-:- =the) ^(N:+:- =dog))");
  CountBundle counts = extract_counts(trees);
  CHECK(counts.tree_count == 1);
  CHECK(counts.schema_counts == std::map<int, long long>{{1, 1}});
  CHECK(counts.theta_observations.empty());
}

TEST_CASE("extract_counts: complement/adjunct marks drive the split") {
  auto trees = read_corpus(
      "(V:-:- ^(V:-:- ^(V:-:+ =saw) +(N:-:- =dogs))"
      " (P:-:- ^(P:-:+ =with) +(N:-:- =cats)))");
  CountBundle counts = extract_counts(trees);
  CHECK(counts.schema_counts ==
        std::map<int, long long>{{3, 2}, {4, 1}});
  REQUIRE(counts.theta_observations.size() == 1);
  CHECK(counts.theta_observations[0] ==
        std::pair<std::string, std::string>{"saw", "N"});
}

TEST_CASE("extract_counts: unclassifiable node is rejected") {
  // comp=+ head daughter of an unmarked (adjunct) sister fits no schema.
  auto trees = read_corpus("(V:-:+ ^(V:-:+ =saw) (N:-:- =dogs))");
  CHECK_THROWS_AS(extract_counts(trees), UnclassifiableBranchError);
}

TEST_CASE("extract_counts: fixture corpus totals") {
  CountBundle counts = extract_counts(fixture_corpus());
  std::map<int, long long> expected{{1, 86}, {2, 9}, {3, 53}, {4, 8}, {5, 9}};
  CHECK(counts.schema_counts == expected);
  CHECK(counts.total_branches() == 165);
  CHECK(counts.theta_observations.size() == 23);

  // Count conservation: branches = sum over trees of (leaves - 1).
  long long leaves_minus_one = 0;
  for (const CorpusTree& t : fixture_corpus()) {
    std::vector<const CorpusNode*> stack{t.root.get()};
    long long leaves = 0;
    while (!stack.empty()) {
      const CorpusNode* n = stack.back();
      stack.pop_back();
      if (n->is_leaf()) {
        ++leaves;
        continue;
      }
      stack.push_back(n->left.get());
      stack.push_back(n->right.get());
    }
    leaves_minus_one += leaves - 1;
  }
  CHECK(counts.total_branches() == leaves_minus_one);
}

TEST_CASE("category independence: relabeling preserves schema counts") {
  // Category bijection applied to every node of every tree.
  std::map<Category, Category> swap{
      {Category::N, Category::V},   {Category::V, Category::N},
      {Category::P, Category::A},   {Category::A, Category::P},
      {Category::Det, Category::Adv}, {Category::Adv, Category::Det},
      {Category::I, Category::C},   {Category::C, Category::I}};
  auto trees = fixture_corpus();
  struct Relabel {
    const std::map<Category, Category>& swap;
    void operator()(CorpusNode* n) const {
      n->category = swap.at(n->category);
      if (n->is_leaf()) return;
      (*this)(n->left.get());
      (*this)(n->right.get());
    }
  };
  CountBundle before = extract_counts(trees);
  for (CorpusTree& t : trees) Relabel{swap}(t.root.get());
  CountBundle after = extract_counts(trees);
  CHECK(before.schema_counts == after.schema_counts);
  CHECK(estimate_flat(before.schema_counts) ==
        estimate_flat(after.schema_counts));
}

TEST_CASE("read_lexicon: fixture and error paths") {
  Lexicon lexicon = fixture_lexicon();
  CHECK(lexicon.contains("the"));
  CHECK(lexicon.find("barked")->size() == 2);  // V and I entries
  const auto* see = lexicon.find("see");
  REQUIRE(see != nullptr);
  CHECK((*see)[0]->grids.size() == 2);

  CHECK_THROWS_AS(read_lexicon(""), LoadError);
  CHECK_THROWS_AS(read_lexicon("dog\tN\t+\n"), LoadError);     // arity
  CHECK_THROWS_AS(read_lexicon("dog\tNP\t+\t-\n"), LoadError);  // category
  CHECK_THROWS_AS(read_lexicon("dog\tN\t?\t-\n"), LoadError);   // spec mark
  CHECK_THROWS_AS(read_lexicon("dog\tN\t+\ttheme/mid:N\n"), LoadError);

  // Duplicate (word, category, grid) names the line.
  try {
    read_lexicon("dog\tN\t+\t-\ncat\tN\t+\t-\ndog\tN\t+\t-\n");
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    CHECK(e.line == 3);
  }
  // Conflicting spec for one (word, category).
  CHECK_THROWS_AS(read_lexicon("dog\tN\t+\t-\ndog\tN\t-\tagent/ext:N\n"),
                  LoadError);
  // Two grids for one entry are fine.
  Lexicon two = read_lexicon(
      "see\tV\t-\ttheme/int:N\nsee\tV\t-\ttheme/int:N;instrument/int:P\n");
  CHECK((*two.find("see"))[0]->grids.size() == 2);
}

TEST_CASE("lexicon round-trip") {
  Lexicon first = fixture_lexicon();
  std::string written = write_lexicon(first);
  Lexicon second = read_lexicon(written);
  CHECK(write_lexicon(second) == written);
  CHECK(first.entry_count() == second.entry_count());
}

TEST_CASE("tables round-trip exactly, including counts and mode") {
  CountBundle counts = extract_counts(fixture_corpus());
  for (Conditioning mode :
       {Conditioning::Flat, Conditioning::MotherConditioned}) {
    SchemaTable schema_table = mode == Conditioning::Flat
                                   ? estimate_flat(counts.schema_counts)
                                   : estimate_mother_conditioned(
                                         counts.schema_counts);
    ThetaTable theta_table =
        estimate_theta_table(counts.theta_observations, 1.0);
    std::string text = write_tables(schema_table, theta_table);
    auto [schema_back, theta_back] = read_tables(text);
    CHECK(schema_back == schema_table);
    CHECK(theta_back == theta_table);
    CHECK(write_tables(schema_back, theta_back) == text);
  }
}

TEST_CASE("read_tables: version and normalization validation") {
  CHECK_THROWS_AS(read_tables(""), LoadError);
  CHECK_THROWS_AS(read_tables("probranch-tables 2 flat 1\n"), LoadError);
  CHECK_THROWS_AS(read_tables("something-else 1 flat 1\n"), LoadError);

  // Hand-edited probability that no longer matches its counts.
  std::string bad =
      "probranch-tables 1 flat 1\n"
      "schema 1 4 0.3\n"   // counts say 0.4
      "schema 2 3 0.3\n"
      "schema 3 2 0.2\n"
      "schema 4 1 0.1\n"
      "schema 5 0 0\n";
  try {
    read_tables(bad);
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("not normalized") != std::string::npos);
  }

  std::string bad_theta =
      "probranch-tables 1 flat 1\n"
      "schema 1 4 0.4\nschema 2 3 0.3\nschema 3 2 0.2\nschema 4 1 0.1\n"
      "schema 5 0 0\n"
      "theta saw N 6 0.5\n"   // counts say 0.6
      "theta saw N,P 4 0.4\n";
  CHECK_THROWS_AS(read_tables(bad_theta), LoadError);
}

TEST_CASE("estimation pipeline is byte-deterministic") {
  std::string corpus_bytes = fixture("corpus.trees");
  auto run = [&]() {
    auto trees = read_corpus(corpus_bytes);
    CountBundle counts = extract_counts(trees);
    return write_tables(estimate_flat(counts.schema_counts),
                        estimate_theta_table(counts.theta_observations, 1.0));
  };
  std::string first = run();
  for (int i = 0; i < 3; ++i) CHECK(run() == first);
}

TEST_CASE("corpus_format round-trips gold trees and matches markers") {
  // A marker rendered in corpus format equals the corresponding gold tree.
  Lexicon lexicon = fixture_lexicon();
  ParseForest f = parse(words("the dog barked"), lexicon);
  REQUIRE(f.completed().size() == 1);
  std::string rendered = corpus_format(f.completed()[0]);
  CHECK(rendered ==
        "(I:-:- (N:-:- (Det:-:- =the) ^(N:+:- =dog)) ^(I:+:- =barked))");
  auto reparsed = read_corpus(rendered);
  CHECK(corpus_format(*reparsed[0].root) == rendered);
}

TEST_CASE("validate_against_lexicon rejects mismatched leaves") {
  Lexicon lexicon = fixture_lexicon();
  auto ok = fixture_corpus();
  validate_against_lexicon(ok, lexicon);  // must not throw

  auto unknown = read_corpus("(I:-:- (N:-:- =zzz) ^(I:+:- =barked))");
  CHECK_THROWS_AS(validate_against_lexicon(unknown, lexicon), LoadError);

  // Grid identity mismatch: "see" never has a bare "-" grid.
  auto bad_grid = read_corpus("(I:-:- (N:-:- =dogs) ^(I:+:- ^(I:+:+ =did) "
                              "+(V:-:- =see)))");
  CHECK_THROWS_AS(validate_against_lexicon(bad_grid, lexicon), LoadError);
}
