#pragma once

#include <functional>
#include <string>
#include <vector>

#include "probranch/theta.hpp"
#include "probranch/xbar.hpp"

namespace probranch {

struct ParseScores {
  double xbar_prob = 1.0;
  double theta_prob = 1.0;
  double global_prob = 1.0;
};

// Per-module "pure" probabilities — each computed from its own module's
// quantities only — combined into the global probability by product.
// Accumulated in log space.
ParseScores score(const PhraseMarker& marker, const SchemaTable& schema_table,
                  const ThetaTable& theta_table);

// One registered probability factor. The global probability is the product
// over all registered factors; further grammar modules can contribute by
// adding a factor.
struct ScoreFactor {
  std::string name;
  std::function<double(const PhraseMarker&)> log_probability;
};

// The two shipped factors (X-bar, theta), holding copies of the tables.
std::vector<ScoreFactor> standard_factors(const SchemaTable& schema_table,
                                          const ThetaTable& theta_table);

double global_log_probability(const PhraseMarker& marker,
                              const std::vector<ScoreFactor>& factors);

struct RankedParse {
  PhraseMarker marker;
  double xbar_prob = 1.0;
  double theta_prob = 1.0;
  double global_prob = 1.0;
  int rank = 0;  // 1-based, descending global probability
};

// Scores and sorts all markers of one sentence, descending by global
// probability; ties broken by the canonical serialization, so the output is
// independent of input order.
std::vector<RankedParse> rank(const std::vector<PhraseMarker>& markers,
                              const SchemaTable& schema_table,
                              const ThetaTable& theta_table);

}  // namespace probranch
