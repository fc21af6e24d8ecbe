#include "probranch/ranking.hpp"

#include <algorithm>
#include <cmath>

namespace probranch {

ParseScores score(const PhraseMarker& marker, const SchemaTable& schema_table,
                  const ThetaTable& theta_table) {
  double xbar_log = xbar_log_probability(marker, schema_table);
  double theta_log = theta_log_probability(marker, theta_table);
  return ParseScores{std::exp(xbar_log), std::exp(theta_log),
                     std::exp(xbar_log + theta_log)};
}

std::vector<ScoreFactor> standard_factors(const SchemaTable& schema_table,
                                          const ThetaTable& theta_table) {
  return {
      {"xbar",
       [schema_table](const PhraseMarker& m) {
         return xbar_log_probability(m, schema_table);
       }},
      {"theta",
       [theta_table](const PhraseMarker& m) {
         return theta_log_probability(m, theta_table);
       }},
  };
}

double global_log_probability(const PhraseMarker& marker,
                              const std::vector<ScoreFactor>& factors) {
  double total = 0.0;
  for (const ScoreFactor& factor : factors) {
    total += factor.log_probability(marker);
  }
  return total;
}

std::vector<RankedParse> rank(const std::vector<PhraseMarker>& markers,
                              const SchemaTable& schema_table,
                              const ThetaTable& theta_table) {
  std::vector<RankedParse> out;
  out.reserve(markers.size());
  for (const PhraseMarker& marker : markers) {
    ParseScores s = score(marker, schema_table, theta_table);
    out.push_back(
        RankedParse{marker, s.xbar_prob, s.theta_prob, s.global_prob, 0});
  }
  std::sort(out.begin(), out.end(),
            [](const RankedParse& a, const RankedParse& b) {
              if (a.global_prob != b.global_prob) {
                return a.global_prob > b.global_prob;
              }
              return a.marker.detail_string() < b.marker.detail_string();
            });
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].rank = static_cast<int>(i) + 1;
  }
  return out;
}

}  // namespace probranch
