#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "probranch/corpus.hpp"
#include "probranch/model.hpp"

namespace testutil {

inline std::string data_dir() {
  const char* env = std::getenv("PROBRANCH_DATA");
  return env ? env : "data";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot read " << path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string fixture(const std::string& name) {
  return read_file(data_dir() + "/" + name);
}

inline probranch::Lexicon fixture_lexicon() {
  return probranch::read_lexicon(fixture("lexicon.tsv"));
}

inline std::vector<probranch::CorpusTree> fixture_corpus() {
  return probranch::read_corpus(fixture("corpus.trees"));
}

inline std::vector<std::string> words(const std::string& sentence) {
  std::istringstream in(sentence);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

using probranch::Category;
using probranch::Mark;
using probranch::RoleLabel;
using probranch::RolePosition;
using probranch::ThetaGrid;
using probranch::ThetaRole;

inline ThetaRole ext(RoleLabel label, Category selects) {
  return ThetaRole{label, RolePosition::External, selects};
}
inline ThetaRole intr(RoleLabel label, Category selects) {
  return ThetaRole{label, RolePosition::Internal, selects};
}
inline ThetaGrid grid(std::vector<ThetaRole> roles) {
  return ThetaGrid{std::move(roles), 1};
}

}  // namespace testutil
