#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "oracle.hpp"
#include "probranch/engine.hpp"
#include "probranch/ranking.hpp"
#include "test_util.hpp"

using namespace probranch;
using namespace testutil;

namespace {

struct Fixture {
  Lexicon lexicon = fixture_lexicon();
  SchemaTable schema_table;
  ThetaTable theta_table;

  Fixture() {
    CountBundle counts = extract_counts(fixture_corpus());
    schema_table = estimate_flat(counts.schema_counts);
    theta_table = estimate_theta_table(counts.theta_observations, 1.0);
  }

  std::vector<PhraseMarker> markers(const std::string& sentence) {
    return enumerate_markers(parse(words(sentence), lexicon));
  }
};

ThetaTable scaled(const ThetaTable& table, double factor) {
  ThetaTable out = table;
  out.default_probability *= factor;
  for (auto& [word, grids] : out.heads) {
    for (auto& [identity, stat] : grids) stat.probability *= factor;
  }
  return out;
}

}  // namespace

TEST_CASE("score: single-leaf marker is the empty product") {
  Fixture fx;
  auto markers = fx.markers("dogs");
  REQUIRE(markers.size() == 1);
  ParseScores s = score(markers[0], fx.schema_table, fx.theta_table);
  CHECK(s.xbar_prob == 1.0);
  CHECK(s.theta_prob == 1.0);
  CHECK(s.global_prob == 1.0);
}

TEST_CASE("score: hand product and the oracle route agree") {
  Fixture fx;
  for (const char* sentence :
       {"the dog barked", "the man did see the dog",
        "the man saw the dog with the telescope"}) {
    for (const PhraseMarker& m : fx.markers(sentence)) {
      ParseScores s = score(m, fx.schema_table, fx.theta_table);
      oracle::Scores o = oracle::score(m, fx.schema_table, fx.theta_table);
      CHECK(s.xbar_prob == doctest::Approx(o.xbar).epsilon(1e-12));
      CHECK(s.theta_prob == doctest::Approx(o.theta).epsilon(1e-12));
      CHECK(s.global_prob == doctest::Approx(o.global).epsilon(1e-12));
      // Product identity at 1e-12 relative.
      CHECK(std::fabs(s.global_prob - s.xbar_prob * s.theta_prob) <=
            1e-12 * s.global_prob);
    }
  }
}

TEST_CASE("score: purity — xbar ignores the theta table and vice versa") {
  Fixture fx;
  ThetaTable other_theta = scaled(fx.theta_table, 0.5);
  SchemaTable other_schema =
      estimate_mother_conditioned({{1, 4}, {2, 3}, {3, 2}, {4, 1}, {5, 1}});

  for (const PhraseMarker& m :
       fx.markers("the man did see the dog with the telescope")) {
    ParseScores base = score(m, fx.schema_table, fx.theta_table);
    ParseScores theta_changed = score(m, fx.schema_table, other_theta);
    CHECK(base.xbar_prob == theta_changed.xbar_prob);
    ParseScores schema_changed = score(m, other_schema, fx.theta_table);
    CHECK(base.theta_prob == schema_changed.theta_prob);
  }
}

TEST_CASE("score: xbar is a function of structure alone") {
  Fixture fx;
  // Markers sharing bracketing, features and schema assignments (the
  // corpus-format shape determines them) must share xbar regardless of
  // grid choices and theta events.
  auto markers = fx.markers("the man did see the dog with the telescope");
  std::map<std::string, std::set<double>> xbar_by_shape;
  for (const PhraseMarker& m : markers) {
    ParseScores s = score(m, fx.schema_table, fx.theta_table);
    xbar_by_shape[corpus_format(m)].insert(s.xbar_prob);
  }
  for (const auto& [shape, xbars] : xbar_by_shape) {
    CHECK(xbars.size() == 1);
  }
}

TEST_CASE("rank: descending global with deterministic tie-breaking") {
  Fixture fx;
  auto markers = fx.markers("the man did see the dog with the telescope");
  REQUIRE(markers.size() >= 2);

  std::vector<RankedParse> ranked =
      rank(markers, fx.schema_table, fx.theta_table);
  REQUIRE(ranked.size() == markers.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    CHECK(ranked[i].rank == static_cast<int>(i) + 1);
    if (i > 0) {
      bool ordered =
          ranked[i - 1].global_prob > ranked[i].global_prob ||
          (ranked[i - 1].global_prob == ranked[i].global_prob &&
           ranked[i - 1].marker.detail_string() <
               ranked[i].marker.detail_string());
      CHECK(ordered);
    }
  }

  // Ties exist in this sentence (the adjunct attachment family) and their
  // order is stable across 100 randomized repetitions.
  bool has_tie = false;
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    if (ranked[i - 1].global_prob == ranked[i].global_prob) has_tie = true;
  }
  CHECK(has_tie);

  std::vector<std::string> baseline;
  for (const RankedParse& r : ranked) {
    baseline.push_back(r.marker.detail_string());
  }
  std::mt19937 rng(7);
  for (int run = 0; run < 100; ++run) {
    std::vector<PhraseMarker> shuffled = markers;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<RankedParse> again =
        rank(shuffled, fx.schema_table, fx.theta_table);
    std::vector<std::string> order;
    for (const RankedParse& r : again) {
      order.push_back(r.marker.detail_string());
    }
    CHECK(order == baseline);
  }
}

TEST_CASE("rank: uniform theta scaling never reorders") {
  Fixture fx;
  for (const char* sentence :
       {"the man did see the dog with the telescope",
        "the man did watch the dog with the telescope",
        "the man saw the dog with the telescope"}) {
    auto markers = fx.markers(sentence);
    auto base = rank(markers, fx.schema_table, fx.theta_table);
    for (double factor : {0.5, 0.25, 0.9}) {
      auto scaled_rank =
          rank(markers, fx.schema_table, scaled(fx.theta_table, factor));
      REQUIRE(scaled_rank.size() == base.size());
      for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(scaled_rank[i].marker.detail_string() ==
              base[i].marker.detail_string());
      }
    }
  }
}

TEST_CASE("factor registry: the shipped pair matches score, extras multiply") {
  Fixture fx;
  auto markers = fx.markers("the man did see the dog");
  REQUIRE(markers.size() == 1);
  const PhraseMarker& m = markers[0];

  auto factors = standard_factors(fx.schema_table, fx.theta_table);
  ParseScores s = score(m, fx.schema_table, fx.theta_table);
  CHECK(std::exp(global_log_probability(m, factors)) ==
        doctest::Approx(s.global_prob).epsilon(1e-12));

  factors.push_back({"extra", [](const PhraseMarker&) {
                       return std::log(0.5);
                     }});
  CHECK(std::exp(global_log_probability(m, factors)) ==
        doctest::Approx(0.5 * s.global_prob).epsilon(1e-12));
}

TEST_CASE("rank: empty input yields empty output") {
  Fixture fx;
  CHECK(rank({}, fx.schema_table, fx.theta_table).empty());
}

TEST_CASE("rank: single marker gets rank 1") {
  Fixture fx;
  auto markers = fx.markers("the dog barked");
  REQUIRE(markers.size() == 1);
  auto ranked = rank(markers, fx.schema_table, fx.theta_table);
  CHECK(ranked[0].rank == 1);
}

TEST_CASE("mother conditioning neutralizes schemata 1-2 and flips ranking") {
  Fixture fx;
  SchemaTable mother = estimate_mother_conditioned(
      extract_counts(fixture_corpus()).schema_counts);
  CHECK(mother.probability(1) == 1.0);
  CHECK(mother.probability(2) == 1.0);

  auto complement_top = [&](const std::string& sentence,
                            const SchemaTable& table) {
    auto ranked = rank(fx.markers(sentence), table, fx.theta_table);
    REQUIRE(!ranked.empty());
    for (const ParseTree* b : ranked[0].marker.branches()) {
      if (b->schema_id == 2 && b->node.category == Category::V) return true;
    }
    return false;
  };

  // Under flat estimation the adjunct-leaning verb wins the adjunct path;
  // class-conditioned estimation charges nothing for schema 2 against the
  // full cost of schemata 3/4/5, so the complement path takes rank 1.
  const std::string sentence = "the man did watch the dog with the telescope";
  CHECK_FALSE(complement_top(sentence, fx.schema_table));
  CHECK(complement_top(sentence, mother));
}

TEST_CASE("rank: complement beats adjunct exactly when theta outweighs") {
  Fixture fx;
  auto is_complement_top = [&](const std::string& sentence) {
    auto ranked =
        rank(fx.markers(sentence), fx.schema_table, fx.theta_table);
    REQUIRE(!ranked.empty());
    // Complement attachment: the verb discharges a P-selecting role, i.e.
    // some branch uses schema 2 headed by the verb.
    for (const ParseTree* b : ranked[0].marker.branches()) {
      if (b->schema_id == 2 && b->node.category == Category::V) return true;
    }
    return false;
  };
  CHECK(is_complement_top("the man did see the dog with the telescope"));
  CHECK(is_complement_top("the man did hit the ball with the stick"));
  CHECK_FALSE(is_complement_top("the man did watch the dog with the telescope"));
  CHECK_FALSE(is_complement_top("the dog did chase the cat in the garden"));
  CHECK_FALSE(is_complement_top("the man saw the dog with the telescope"));
}
