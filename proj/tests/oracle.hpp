#pragma once

// Test-only brute-force oracle: enumerates every binary bracketing, per-token
// grid selection and per-branch schema assignment, filtered by a direct
// transcription of the licensing rules. Independent of the chart engine and
// of license_pair/discharge; it shares only the model structs and rendering
// so results are comparable as strings.

#include <string>
#include <vector>

#include "probranch/model.hpp"
#include "probranch/theta.hpp"
#include "probranch/xbar.hpp"

namespace oracle {

// Sorted detail strings of every licensed complete marker of the sentence.
std::vector<std::string> enumerate_markers(
    const std::vector<std::string>& tokens, const probranch::Lexicon& lexicon,
    bool apply_case_filter);

// Independent scorer: per-branch schema probabilities and per-leaf grid
// probabilities multiplied in plain double arithmetic, no log space.
struct Scores {
  double xbar = 1.0;
  double theta = 1.0;
  double global = 1.0;
};
Scores score(const probranch::PhraseMarker& marker,
             const probranch::SchemaTable& schema_table,
             const probranch::ThetaTable& theta_table);

}  // namespace oracle
