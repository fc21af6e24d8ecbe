// probranch command-line front end: train, parse, eval.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "probranch/case_theory.hpp"
#include "probranch/corpus.hpp"
#include "probranch/engine.hpp"
#include "probranch/ranking.hpp"

namespace {

using namespace probranch;

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsageError = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> tokenize(const std::string& sentence) {
  std::istringstream in(sentence);
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

struct LoadedModel {
  Lexicon lexicon;
  SchemaTable schema_table;
  ThetaTable theta_table;
};

// Loads lexicon + tables or exits with the usage/data code.
LoadedModel load_model_or_exit(const std::string& lexicon_path,
                               const std::string& tables_path) {
  auto lexicon_text = read_file(lexicon_path);
  if (!lexicon_text) {
    std::cerr << "cannot read " << lexicon_path << "\n";
    std::exit(kExitUsageError);
  }
  auto tables_text = read_file(tables_path);
  if (!tables_text) {
    std::cerr << "cannot read " << tables_path << "\n";
    std::exit(kExitUsageError);
  }
  LoadedModel model;
  try {
    model.lexicon = read_lexicon(*lexicon_text);
  } catch (const LoadError& e) {
    std::cerr << lexicon_path << ": " << e.what() << "\n";
    std::exit(kExitDataError);
  }
  try {
    auto [schema_table, theta_table] = read_tables(*tables_text);
    model.schema_table = schema_table;
    model.theta_table = theta_table;
  } catch (const LoadError& e) {
    std::cerr << tables_path << ": " << e.what() << "\n";
    std::exit(kExitDataError);
  }
  return model;
}

void print_trace(std::ostream& out, const PhraseMarker& marker) {
  for (const ParseTree* branch : marker.branches()) {
    const Span& span = branch->node.span;
    out << "  span=[" << span.begin << "," << span.end << ") schema="
        << branch->schema_id << " head="
        << branch->head_daughter().node.head_word;
    if (branch->theta_event) {
      const ThetaEvent& ev = *branch->theta_event;
      const ParseTree& receiver =
          ev.receiver == Side::Left ? *branch->left : *branch->right;
      out << " theta=" << ev.role.to_text() << "->[" <<
          receiver.node.span.begin << "," << receiver.node.span.end << ")";
    }
    if (branch->case_event) {
      const CaseEvent& ev = *branch->case_event;
      const ParseTree& receiver =
          ev.receiver == Side::Left ? *branch->left : *branch->right;
      out << " case=" << to_string(ev.value) << "->[" <<
          receiver.node.span.begin << "," << receiver.node.span.end << ")";
    }
    out << "\n";
  }
}

void print_ranked(std::ostream& out, const std::vector<RankedParse>& ranked,
                  std::size_t top, bool trace) {
  std::size_t shown = std::min(top, ranked.size());
  for (std::size_t i = 0; i < shown; ++i) {
    const RankedParse& r = ranked[i];
    out << "rank=" << r.rank << " global=" << format_probability(r.global_prob)
        << " xbar=" << format_probability(r.xbar_prob)
        << " theta=" << format_probability(r.theta_prob)
        << " tree=" << corpus_format(r.marker) << "\n";
    if (trace) print_trace(out, r.marker);
  }
}

int run_train(const std::string& corpus_path, const std::string& lexicon_path,
              const std::string& out_path, const std::string& conditioning) {
  auto corpus_text = read_file(corpus_path);
  if (!corpus_text) {
    std::cerr << "cannot read " << corpus_path << "\n";
    return kExitUsageError;
  }
  auto lexicon_text = read_file(lexicon_path);
  if (!lexicon_text) {
    std::cerr << "cannot read " << lexicon_path << "\n";
    return kExitUsageError;
  }
  auto mode = conditioning_from_string(conditioning);
  if (!mode) {
    std::cerr << "conditioning must be flat or mother\n";
    return kExitUsageError;
  }
  try {
    Lexicon lexicon = read_lexicon(*lexicon_text);
    std::vector<CorpusTree> trees = read_corpus(*corpus_text);
    validate_against_lexicon(trees, lexicon);
    CountBundle counts = extract_counts(trees);
    SchemaTable schema_table = *mode == Conditioning::Flat
                                   ? estimate_flat(counts.schema_counts)
                                   : estimate_mother_conditioned(
                                         counts.schema_counts);
    ThetaTable theta_table =
        estimate_theta_table(counts.theta_observations, 1.0);

    std::string serialized = write_tables(schema_table, theta_table);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return kExitUsageError;
    }
    out << serialized;

    std::cout << "trees=" << counts.tree_count
              << " branches=" << counts.total_branches() << " schema_counts=";
    for (int id = 1; id <= 5; ++id) {
      std::cout << (id > 1 ? "," : "") << schema_table.counts[id - 1];
    }
    std::cout << " theta_heads=" << theta_table.heads.size()
              << " theta_observations=" << counts.theta_observations.size()
              << " mode=" << to_string(schema_table.mode) << "\n"
              << "wrote " << out_path << "\n";
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << corpus_path << ": " << e.what() << "\n";
    return kExitDataError;
  }
}

int run_parse(const std::string& lexicon_path, const std::string& tables_path,
              std::size_t top, bool no_case_filter, bool trace,
              const std::vector<std::string>& sentence_words) {
  LoadedModel model = load_model_or_exit(lexicon_path, tables_path);
  std::string sentence;
  for (const std::string& w : sentence_words) {
    if (!sentence.empty()) sentence += ' ';
    sentence += w;
  }
  std::vector<std::string> tokens = tokenize(sentence);
  if (tokens.empty()) {
    std::cerr << "empty sentence\n";
    return kExitUsageError;
  }
  try {
    ParseOptions options;
    options.apply_case_filter = !no_case_filter;
    ParseForest forest = parse(tokens, model.lexicon, options);
    std::vector<RankedParse> ranked =
        rank(enumerate_markers(forest), model.schema_table, model.theta_table);
    print_ranked(std::cout, ranked, top == 0 ? ranked.size() : top, trace);
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitDataError;
  }
}

struct SuiteLine {
  std::string sentence;
  std::optional<std::string> gold;  // corpus-format bracketing
};

int run_eval(const std::string& lexicon_path, const std::string& tables_path,
             const std::string& suite_path, bool no_case_filter) {
  LoadedModel model = load_model_or_exit(lexicon_path, tables_path);
  auto suite_text = read_file(suite_path);
  if (!suite_text) {
    std::cerr << "cannot read " << suite_path << "\n";
    return kExitUsageError;
  }

  std::vector<SuiteLine> suite;
  std::istringstream in(*suite_text);
  std::string row;
  while (std::getline(in, row)) {
    if (row.empty() || row[0] == '#') continue;
    auto tab = row.find('\t');
    SuiteLine line;
    line.sentence = row.substr(0, tab);
    if (tab != std::string::npos) line.gold = row.substr(tab + 1);
    suite.push_back(std::move(line));
  }

  ParseOptions options;
  options.apply_case_filter = !no_case_filter;

  std::vector<long long> analysis_counts;
  int matches = 0;
  int failed = 0;
  int gold_rows = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const SuiteLine& line = suite[i];
    std::cout << "sentence=" << (i + 1) << " text=" << line.sentence << "\n";
    std::vector<std::string> tokens = tokenize(line.sentence);
    try {
      if (tokens.empty()) throw EmptyInputError("empty sentence");
      ParseForest forest = parse(tokens, model.lexicon, options);
      std::vector<RankedParse> ranked = rank(
          enumerate_markers(forest), model.schema_table, model.theta_table);
      print_ranked(std::cout, ranked, ranked.size(), false);
      analysis_counts.push_back(static_cast<long long>(ranked.size()));
      std::string top_match = "-";
      if (line.gold) {
        ++gold_rows;
        top_match = "no";
        if (!ranked.empty()) {
          std::vector<CorpusTree> gold_trees = read_corpus(*line.gold);
          if (gold_trees.size() != 1) {
            throw LoadError(0, "suite gold must hold exactly one tree");
          }
          if (corpus_format(*gold_trees[0].root) ==
              corpus_format(ranked[0].marker)) {
            top_match = "yes";
            ++matches;
          }
        }
      }
      std::cout << "result sentence=" << (i + 1)
                << " analyses=" << analysis_counts.back()
                << " top_match=" << top_match << "\n";
    } catch (const Error& e) {
      ++failed;
      std::string reason = e.what();
      std::replace(reason.begin(), reason.end(), ' ', '-');
      std::cout << "result sentence=" << (i + 1) << " failed=" << reason
                << "\n";
    }
  }

  std::cout << "summary sentences=" << suite.size() << " failed=" << failed;
  if (analysis_counts.empty()) {
    std::cout << " mean=- median=-";
  } else {
    double total = 0;
    for (long long c : analysis_counts) total += static_cast<double>(c);
    double mean = total / static_cast<double>(analysis_counts.size());
    std::vector<long long> sorted = analysis_counts;
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = sorted.size();
    double median =
        n % 2 == 1 ? static_cast<double>(sorted[n / 2])
                   : (static_cast<double>(sorted[n / 2 - 1]) +
                      static_cast<double>(sorted[n / 2])) / 2.0;
    std::cout << " mean=" << format_probability(mean)
              << " median=" << format_probability(median);
  }
  std::cout << " top_matches=" << matches << " gold=" << gold_rows << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probabilistic proper-branch parsing toolkit"};
  app.require_subcommand(1);

  std::string corpus_path, lexicon_path, tables_path, out_path, suite_path;
  std::string conditioning = "flat";
  std::size_t top = 0;
  bool no_case_filter = false;
  bool trace = false;
  std::vector<std::string> sentence;

  CLI::App* train = app.add_subcommand("train",
                                       "estimate schema and theta tables");
  train->add_option("--corpus", corpus_path, "bracketed training trees")
      ->required();
  train->add_option("--lexicon", lexicon_path, "lexicon file")->required();
  train->add_option("--out", out_path, "output tables file")->required();
  train->add_option("--conditioning", conditioning,
                    "schema estimation: flat or mother");

  CLI::App* parse_cmd = app.add_subcommand("parse",
                                           "parse and rank one sentence");
  parse_cmd->add_option("--lexicon", lexicon_path, "lexicon file")->required();
  parse_cmd->add_option("--tables", tables_path, "tables file")->required();
  parse_cmd->add_option("--top", top, "print only the K best parses");
  parse_cmd->add_flag("--no-case-filter", no_case_filter,
                      "disable the case filter");
  parse_cmd->add_flag("--trace", trace, "print per-branch licensing events");
  parse_cmd->add_option("sentence", sentence, "whitespace-tokenized sentence")
      ->required();

  CLI::App* eval_cmd = app.add_subcommand("eval", "run a sentence suite");
  eval_cmd->add_option("--lexicon", lexicon_path, "lexicon file")->required();
  eval_cmd->add_option("--tables", tables_path, "tables file")->required();
  eval_cmd->add_option("--suite", suite_path, "suite file")->required();
  eval_cmd->add_flag("--no-case-filter", no_case_filter,
                     "disable the case filter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsageError;
  }

  if (train->parsed()) {
    return run_train(corpus_path, lexicon_path, out_path, conditioning);
  }
  if (parse_cmd->parsed()) {
    return run_parse(lexicon_path, tables_path, top, no_case_filter, trace,
                     sentence);
  }
  return run_eval(lexicon_path, tables_path, suite_path, no_case_filter);
}
