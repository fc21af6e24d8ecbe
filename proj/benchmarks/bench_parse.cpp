#include <benchmark/benchmark.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "probranch/corpus.hpp"
#include "probranch/engine.hpp"
#include "probranch/ranking.hpp"

namespace {

using namespace probranch;

std::string data_dir() {
  const char* env = std::getenv("PROBRANCH_DATA");
  return env ? env : "data";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> words(const std::string& sentence) {
  std::istringstream in(sentence);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

struct Global {
  std::string corpus_bytes = slurp(data_dir() + "/corpus.trees");
  Lexicon lexicon = read_lexicon(slurp(data_dir() + "/lexicon.tsv"));
  SchemaTable schema_table;
  ThetaTable theta_table;

  Global() {
    CountBundle counts = extract_counts(read_corpus(corpus_bytes));
    schema_table = estimate_flat(counts.schema_counts);
    theta_table = estimate_theta_table(counts.theta_observations, 1.0);
  }
};

const Global& global() {
  static Global g;
  return g;
}

void BM_ParseShort(benchmark::State& state) {
  auto tokens = words("the dog barked");
  for (auto _ : state) {
    ParseForest f = parse(tokens, global().lexicon);
    benchmark::DoNotOptimize(f.completed().size());
  }
}
BENCHMARK(BM_ParseShort);

void BM_ParseAmbiguous(benchmark::State& state) {
  auto tokens = words("the man did see the dog with the telescope");
  for (auto _ : state) {
    ParseForest f = parse(tokens, global().lexicon);
    benchmark::DoNotOptimize(f.completed().size());
  }
}
BENCHMARK(BM_ParseAmbiguous);

void BM_ParseWide(benchmark::State& state) {
  auto tokens = words("the big dog saw the cat with the telescope");
  for (auto _ : state) {
    ParseForest f = parse(tokens, global().lexicon);
    benchmark::DoNotOptimize(f.completed().size());
  }
}
BENCHMARK(BM_ParseWide);

void BM_ParseAndRank(benchmark::State& state) {
  auto tokens = words("the man did see the dog with the telescope");
  for (auto _ : state) {
    auto ranked = rank(enumerate_markers(parse(tokens, global().lexicon)),
                       global().schema_table, global().theta_table);
    benchmark::DoNotOptimize(ranked.size());
  }
}
BENCHMARK(BM_ParseAndRank);

void BM_Train(benchmark::State& state) {
  for (auto _ : state) {
    CountBundle counts = extract_counts(read_corpus(global().corpus_bytes));
    SchemaTable t = estimate_flat(counts.schema_counts);
    benchmark::DoNotOptimize(t.total_count());
  }
}
BENCHMARK(BM_Train);

void BM_TablesRoundTrip(benchmark::State& state) {
  std::string text = write_tables(global().schema_table, global().theta_table);
  for (auto _ : state) {
    auto [schema_back, theta_back] = read_tables(text);
    benchmark::DoNotOptimize(schema_back.total_count());
    benchmark::DoNotOptimize(theta_back.heads.size());
  }
}
BENCHMARK(BM_TablesRoundTrip);

}  // namespace

BENCHMARK_MAIN();
