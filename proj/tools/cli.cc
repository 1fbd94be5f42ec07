// Copyright 2026 The mcner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mcner/ablation.h"
#include "mcner/archive.h"
#include "mcner/corpus.h"
#include "mcner/evaluator.h"
#include "mcner/synth.h"
#include "mcner/trainer.h"
#include "mcner/utf8.h"

namespace mcner::cli {
namespace {

struct ModelFlags {
  std::string arch = "plain";
  bool use_root = false;
  bool use_tag_emb = false;
  bool use_features = false;
  int window = 3;
  int dim = 50;
  int hidden = 300;
  int tensor_size = 50;
  int factors = 3;
  int extra_hidden = 0;
  double lr = 0.01;
  double l2 = 1e-4;
  int epochs = 30;
  std::uint64_t seed = 0;
  int patience = 0;

  ModelConfig model_config() const {
    ModelConfig c;
    c.window.window = window;
    c.window.word_dim = c.window.root_dim = c.window.tag_dim = dim;
    c.window.use_root = use_root;
    c.window.use_tag_embedding = use_tag_emb;
    c.window.use_features = use_features;
    c.network.architecture = parse_architecture(arch);
    c.network.hidden_size = hidden;
    c.network.tensor_size = tensor_size;
    c.network.factors = factors;
    c.network.extra_hidden = extra_hidden;
    return c;
  }

  TrainConfig train_config() const {
    TrainConfig t;
    t.learning_rate = lr;
    t.l2 = l2;
    t.epochs = epochs;
    t.seed = seed;
    t.patience = patience;
    return t;
  }
};

void add_hyper_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--window", f.window, "Window size (odd)")->capture_default_str();
  app->add_option("--dim", f.dim, "Word, root and tag embedding size")->capture_default_str();
  app->add_option("--hidden", f.hidden, "Hidden units of the plain layer")->capture_default_str();
  app->add_option("--tensor-size", f.tensor_size, "Output units of the tensor layer")->capture_default_str();
  app->add_option("--factors", f.factors, "Rank of each tensor slice")->capture_default_str();
  app->add_option("--extra-hidden", f.extra_hidden, "Extra tanh layer size (0 = none)")->capture_default_str();
  app->add_option("--lr", f.lr, "AdaGrad learning rate")->capture_default_str();
  app->add_option("--l2", f.l2, "L2 penalty")->capture_default_str();
  app->add_option("--epochs", f.epochs, "Training epochs")->capture_default_str();
  app->add_option("--patience", f.patience, "Early stop after this many epochs without dev gain (0 = off)")
      ->capture_default_str();
}

void add_feature_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--arch", f.arch, "plain or tensor")
      ->check(CLI::IsMember({"plain", "tensor"}))
      ->capture_default_str();
  app->add_flag("--use-root", f.use_root, "Add the root embedding of the current token");
  app->add_flag("--use-tag-emb", f.use_tag_emb, "Condition on the previous tag embedding");
  app->add_flag("--use-features", f.use_features, "Append the binary entity features of the window");
}

struct SynthFlags {
  SynthConfig config;

  void add(CLI::App* app) {
    app->add_option("--n-roots", config.n_roots)->capture_default_str();
    app->add_option("--n-suffixes", config.n_suffixes)->capture_default_str();
    app->add_option("--max-suffix-chain", config.max_suffix_chain)->capture_default_str();
    app->add_option("--loc-gazetteer", config.loc_gazetteer)->capture_default_str();
    app->add_option("--org-gazetteer", config.org_gazetteer)->capture_default_str();
    app->add_option("--per-gazetteer", config.per_gazetteer)->capture_default_str();
    app->add_option("--sentences", config.n_sentences, "Sentences before splitting")->capture_default_str();
    app->add_option("--min-length", config.min_length)->capture_default_str();
    app->add_option("--max-length", config.max_length)->capture_default_str();
    app->add_option("--entity-density", config.entity_density)->capture_default_str();
  }
};

// Picks the column layout of an input file from its first token line when
// the user gave none.
ColumnSchema guess_schema(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::size_t n = 0;
    for (std::string f; fields >> f;) ++n;
    if (n == 0) continue;
    if (n >= 4) return ColumnSchema::parse("surface,root,morph,tag");
    if (n == 3) return ColumnSchema::parse("surface,root,morph");
    if (n == 2) return ColumnSchema::parse("surface,root");
    return ColumnSchema::parse("surface");
  }
  return ColumnSchema::parse("surface");
}

int cmd_train(const std::string& train_path, const std::string& dev_path, const ModelFlags& flags,
              const std::string& schema, bool iob1, const std::string& pretrained_words,
              const std::string& pretrained_roots, const std::string& out_path, std::string log_path,
              std::ostream& err) {
  ReadOptions read;
  read.schema = ColumnSchema::parse(schema);
  read.iob1 = iob1;
  const auto train_set = read_corpus(train_path, read);
  const auto dev_set = read_corpus(dev_path, read);

  const ModelConfig config = flags.model_config();
  Model model = Model::create(build_vocabulary(train_set), config, flags.seed);
  if (!pretrained_words.empty()) {
    const auto c = load_pretrained(pretrained_words, model.tables().words, model.vocab().words,
                                   model.vocab().lowercase_words);
    err << "pretrained words: " << c.found << " loaded, " << c.missing << " missing\n";
  }
  if (!pretrained_roots.empty()) {
    if (!config.window.use_root) throw Error("--pretrained-roots needs --use-root");
    const auto c = load_pretrained(pretrained_roots, model.tables().roots, model.vocab().roots, false);
    err << "pretrained roots: " << c.found << " loaded, " << c.missing << " missing\n";
  }

  if (log_path.empty()) log_path = out_path + ".log";
  std::ofstream log(log_path);
  if (!log) throw Error("cannot open log file " + log_path);
  log << epoch_log_header() << '\n';
  const TrainResult result = train(std::move(model), train_set, dev_set, flags.train_config(),
                                   [&](const EpochLog& row) { log << format_epoch_log(row) << '\n' << std::flush; });

  ModelArchive archive{result.model, {flags.seed, result.best_epoch, result.best_dev_f1}};
  save_archive(std::filesystem::path(out_path), archive);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "best epoch %d, dev F1 %.2f\n", result.best_epoch, result.best_dev_f1);
  err << buf;
  return kExitOk;
}

int cmd_tag(const std::string& model_path, const std::string& input_path, std::string schema, bool constrained,
            std::ostream& out) {
  const ModelArchive archive = load_archive(std::filesystem::path(model_path));
  ReadOptions read;
  read.schema = schema.empty() ? guess_schema(input_path) : ColumnSchema::parse(schema);
  const auto sentences = read_corpus(input_path, read);
  for (const auto& sentence : sentences) {
    const auto predicted = archive.model.tag(sentence, constrained);
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      const auto& t = sentence.tokens[i];
      out << t.surface << ' ' << t.root << ' ' << format_morph(t.morph) << ' ';
      if (t.tag) out << *t.tag << ' ';
      out << predicted[i] << '\n';
    }
    out << '\n';
  }
  return kExitOk;
}

int cmd_eval(const std::string& gold_path, const std::string& predicted_path, const std::string& schema,
             bool table, std::ostream& out) {
  ReadOptions read;
  read.schema = ColumnSchema::parse(schema);
  const auto gold = read_corpus(gold_path, read);
  const auto report = evaluate(gold, read_last_column(predicted_path));
  out << (table ? format_table(report, '\t') : format_conlleval(report));
  return kExitOk;
}

int cmd_neighbors(const std::string& model_path, const std::string& query, int k, const std::string& which,
                  std::ostream& out, std::ostream& err) {
  if (k < 1) throw Error("-k must be >= 1");
  const ModelArchive archive = load_archive(std::filesystem::path(model_path));
  const auto& model = archive.model;
  const bool roots = which == "roots";
  if (roots && !model.config().window.use_root) throw Error("model has no root embeddings");
  std::string key = query;
  if (!roots && model.vocab().lowercase_words) key = utf8::lowercase(key);
  const auto result = nearest_neighbors(roots ? model.tables().roots : model.tables().words,
                                        roots ? model.vocab().roots : model.vocab().words, key,
                                        static_cast<std::size_t>(k));
  char buf[64];
  for (std::size_t r = 0; r < result.neighbors.size(); ++r) {
    std::snprintf(buf, sizeof(buf), "%.6f", result.neighbors[r].cosine);
    out << r + 1 << '\t' << result.neighbors[r].token << '\t' << buf << '\n';
  }
  if (result.zero_norm_skipped) err << result.zero_norm_skipped << " zero vectors skipped\n";
  return kExitOk;
}

int cmd_synth(SynthConfig config, const std::string& out_dir, std::ostream& out) {
  const SynthCorpus corpus = generate(config);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_corpus(dir / "train.txt", corpus.split.train);
  write_corpus(dir / "dev.txt", corpus.split.dev);
  write_corpus(dir / "test.txt", corpus.split.test);
  out << format_report(corpus.report);
  return kExitOk;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, ',');) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

int cmd_ablate(const AblationConfig& base, const std::string& variants, int n_seeds, std::ostream& out,
               std::ostream& err, bool quiet) {
  AblationConfig config = base;
  config.variants.clear();
  for (const auto& name : split_list(variants)) config.variants.push_back(parse_variant(name));
  if (n_seeds < 1) throw Error("--seeds must be >= 1");
  config.seeds.clear();
  for (int s = 0; s < n_seeds; ++s) config.seeds.push_back(base.synth.seed + static_cast<std::uint64_t>(s));
  const auto table = run_ablation(config, [&](const std::string& v, std::uint64_t seed, const F1Row& f) {
    if (quiet) return;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", f[3]);
    err << "seed " << seed << ' ' << v << " test overall F1 " << buf << '\n';
  });
  out << format_ablation(table);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neural named-entity tagger for morphologically rich languages"};
  app.require_subcommand(1);

  ModelFlags flags;
  std::string train_path, dev_path, schema = "surface,root,morph,tag", out_path, log_path;
  std::string pretrained_words, pretrained_roots;
  bool iob1 = false;
  auto* train = app.add_subcommand("train", "Train a model and write an archive");
  train->add_option("--train", train_path, "Training corpus")->required()->check(CLI::ExistingFile);
  train->add_option("--dev", dev_path, "Development corpus")->required()->check(CLI::ExistingFile);
  train->add_option("--out", out_path, "Archive to write")->required();
  train->add_option("--log", log_path, "Epoch log (default: <out>.log)");
  train->add_option("--schema", schema, "Corpus columns")->capture_default_str();
  train->add_flag("--iob1", iob1, "Input tags are IOB1");
  train->add_option("--pretrained-words", pretrained_words, "word2vec text file")->check(CLI::ExistingFile);
  train->add_option("--pretrained-roots", pretrained_roots, "word2vec text file")->check(CLI::ExistingFile);
  train->add_option("--seed", flags.seed, "Random seed")->capture_default_str();
  add_feature_flags(train, flags);
  add_hyper_flags(train, flags);

  std::string model_path, input_path, tag_schema;
  bool constrained = false;
  auto* tag = app.add_subcommand("tag", "Tag a corpus; prints it with a predicted column appended");
  tag->add_option("--model", model_path, "Model archive")->required()->check(CLI::ExistingFile);
  tag->add_option("--input", input_path, "Corpus to tag")->required()->check(CLI::ExistingFile);
  tag->add_option("--schema", tag_schema, "Input columns (default: guessed from the first line)");
  tag->add_flag("--constrained", constrained, "Forbid IOB2-invalid tag sequences");

  std::string gold_path, predicted_path, eval_schema = "surface,root,morph,tag";
  bool table = false;
  auto* eval = app.add_subcommand("eval", "Score predictions against gold tags");
  eval->add_option("--gold", gold_path, "Gold corpus")->required()->check(CLI::ExistingFile);
  eval->add_option("--predicted", predicted_path, "Predicted tags in the last column")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--schema", eval_schema, "Gold corpus columns")->capture_default_str();
  eval->add_flag("--table", table, "Tab-separated counts instead of the conlleval layout");

  std::string query, which = "words";
  int k = 10;
  auto* neighbors = app.add_subcommand("neighbors", "Nearest neighbors of a word by cosine similarity");
  neighbors->add_option("--model", model_path, "Model archive")->required()->check(CLI::ExistingFile);
  neighbors->add_option("--query", query, "Query word")->required();
  neighbors->add_option("-k", k, "Number of neighbors")->capture_default_str();
  neighbors->add_option("--table", which, "words or roots")
      ->check(CLI::IsMember({"words", "roots"}))
      ->capture_default_str();

  SynthFlags synth_flags;
  std::string out_dir;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus split into train/dev/test");
  synth->add_option("--out-dir", out_dir, "Directory for train.txt, dev.txt, test.txt")->required();
  synth->add_option("--seed", synth_flags.config.seed)->capture_default_str();
  synth_flags.add(synth);

  SynthFlags ablate_synth;
  ModelFlags ablate_flags;
  ablate_flags.epochs = 10;
  std::string variants = "NN,NN+root,NN+root+tag,NN+root+tensor";
  int n_seeds = 1;
  bool quiet = false;
  auto* ablate = app.add_subcommand("ablate", "Train feature variants on shared synthetic splits");
  ablate->add_option("--variants", variants, "Comma-separated variants")->capture_default_str();
  ablate->add_option("--seeds", n_seeds, "Number of consecutive seeds to average")->capture_default_str();
  ablate->add_option("--seed", ablate_synth.config.seed, "First seed")->capture_default_str();
  ablate->add_flag("--quiet", quiet, "No per-run progress on stderr");
  ablate_synth.add(ablate);
  add_hyper_flags(ablate, ablate_flags);

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) {
      return cmd_train(train_path, dev_path, flags, schema, iob1, pretrained_words, pretrained_roots, out_path,
                       log_path, err);
    }
    if (*tag) return cmd_tag(model_path, input_path, tag_schema, constrained, out);
    if (*eval) return cmd_eval(gold_path, predicted_path, eval_schema, table, out);
    if (*neighbors) return cmd_neighbors(model_path, query, k, which, out, err);
    if (*synth) return cmd_synth(synth_flags.config, out_dir, out);
    if (*ablate) {
      AblationConfig config;
      config.synth = ablate_synth.config;
      config.model = ablate_flags.model_config();
      config.train = ablate_flags.train_config();
      return cmd_ablate(config, variants, n_seeds, out, err, quiet);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace mcner::cli
