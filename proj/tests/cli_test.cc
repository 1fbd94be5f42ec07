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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.h"
#include "mcner/archive.h"
#include "oracles.h"

namespace mcner {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mcner");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mcner_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void make_corpus() {
    const auto r = run({"synth", "--out-dir", dir_.string(), "--sentences", "60", "--min-length", "3",
                        "--max-length", "6", "--seed", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  std::vector<std::string> train_args(const std::string& out) const {
    return {"train", "--train", path("train.txt"), "--dev", path("dev.txt"), "--out", out, "--epochs", "3",
            "--dim", "5", "--hidden", "12", "--tensor-size", "4", "--factors", "2", "--arch", "tensor",
            "--use-root", "--use-tag-emb", "--use-features", "--seed", "2"};
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"train", "--arch", "cubic"}).code, cli::kExitUsage);
}

TEST_F(CliTest, MissingDevFileNamesTheFlag) {
  make_corpus();
  const auto r = run({"train", "--train", path("train.txt"), "--dev", path("nope.txt"), "--out", path("m")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("--dev"), std::string::npos) << r.err;
}

TEST_F(CliTest, TrainTagEvalPipeline) {
  make_corpus();
  const auto t = run(train_args(path("m.bin")));
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(slurp(path("m.bin.log")).rfind("epoch\tloss", 0), 0u);

  const auto tagged = run({"tag", "--model", path("m.bin"), "--input", path("test.txt")});
  ASSERT_EQ(tagged.code, 0) << tagged.err;
  std::ofstream(path("pred.txt")) << tagged.out;
  // Gold plus appended prediction: five columns per token line.
  std::istringstream first(tagged.out.substr(0, tagged.out.find('\n')));
  int columns = 0;
  for (std::string f; first >> f;) ++columns;
  EXPECT_EQ(columns, 5);

  const auto self = run({"eval", "--gold", path("test.txt"), "--predicted", path("test.txt")});
  ASSERT_EQ(self.code, 0);
  EXPECT_NE(self.out.find("FB1: 100.00"), std::string::npos) << self.out;
  const auto eval = run({"eval", "--gold", path("test.txt"), "--predicted", path("pred.txt"), "--table"});
  ASSERT_EQ(eval.code, 0) << eval.err;
  EXPECT_EQ(eval.out.rfind("type\tgold\tfound", 0), 0u);
}

TEST_F(CliTest, TrainingIsByteReproducible) {
  make_corpus();
  ASSERT_EQ(run(train_args(path("a.bin"))).code, 0);
  ASSERT_EQ(run(train_args(path("b.bin"))).code, 0);
  EXPECT_EQ(slurp(path("a.bin")), slurp(path("b.bin")));
  EXPECT_EQ(slurp(path("a.bin.log")), slurp(path("b.bin.log")));
}

TEST_F(CliTest, EmptyInputTagsToEmptyOutput) {
  make_corpus();
  ASSERT_EQ(run(train_args(path("m.bin"))).code, 0);
  std::ofstream(path("empty.txt")) << "";
  const auto r = run({"tag", "--model", path("m.bin"), "--input", path("empty.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, UntaggedInputWithUnknownWords) {
  make_corpus();
  ASSERT_EQ(run(train_args(path("m.bin"))).code, 0);
  std::ofstream(path("raw.txt")) << "Жаңасөз жаңа 100000\nбелгісіз белгісіз 000000\n\n";
  const auto r = run({"tag", "--model", path("m.bin"), "--input", path("raw.txt"), "--constrained"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
}

TEST_F(CliTest, EvalFixtureWithOneBoundaryError) {
  std::ofstream(path("gold.txt")) << "Астана астана 100010 B-LOC\nқаласы қала 100000 O\n\n"
                                     "Нұр нұр 100010 B-ORG\nОтан отан 100010 I-ORG\nпартиясы партия 100000 I-ORG\n\n"
                                     "Абай абай 100010 B-PER\nжазды жаз 100000 O\n\n";
  std::ofstream(path("pred.txt")) << "Астана B-LOC\nқаласы O\n\nНұр B-ORG\nОтан I-ORG\nпартиясы O\n\n"
                                     "Абай B-PER\nжазды O\n\n";
  const auto r = run({"eval", "--gold", path("gold.txt"), "--predicted", path("pred.txt"), "--table"});
  ASSERT_EQ(r.code, 0) << r.err;
  // 3 gold, 3 found, 2 correct: P = R = F = 66.67.
  EXPECT_NE(r.out.find("Overall\t3\t3\t2\t66.67\t66.67\t66.67"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("ORG\t1\t1\t0\t0.00\t0.00\t0.00"), std::string::npos) << r.out;
  const auto text = run({"eval", "--gold", path("gold.txt"), "--predicted", path("pred.txt")});
  for (const char* row : {"LOC:", "ORG:", "PER:", "Overall:"}) EXPECT_NE(text.out.find(row), std::string::npos);
}

TEST_F(CliTest, EvalMisalignmentIsARuntimeError) {
  std::ofstream(path("gold.txt")) << "a a 000000 O\n\nb b 000000 O\nc c 000000 O\n\n";
  std::ofstream(path("pred.txt")) << "a O\n\nb O\n\n";
  const auto r = run({"eval", "--gold", path("gold.txt"), "--predicted", path("pred.txt")});
  EXPECT_EQ(r.code, cli::kExitRuntime);
  EXPECT_NE(r.err.find("sentence 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, NeighborsOnToyArchive) {
  Vocabulary vocab;
  for (const char* w : {"алма", "алмұрт", "қала"}) {
    vocab.words.add(w);
    vocab.roots.add(w);
  }
  vocab.tags.add("B-LOC");
  auto config = testing::tiny_config(Architecture::kPlain, false, false, false);
  config.window.word_dim = 2;
  Model model = Model::create(vocab, config, 0);
  auto& words = model.tables().words;
  words.column(vocab.words.lookup("алма")) << 1, 1;
  words.column(vocab.words.lookup("алмұрт")) << 1, 1;
  words.column(vocab.words.lookup("қала")) << 1, -1;
  save_archive(fs::path(path("toy.bin")), ModelArchive{model, {}});

  const auto r = run({"neighbors", "--model", path("toy.bin"), "--query", "Алма"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "1\tалмұрт\t1.000000");
  const auto oov = run({"neighbors", "--model", path("toy.bin"), "--query", "жоқ"});
  EXPECT_NE(oov.code, 0);
  EXPECT_NE(oov.err.find("out of vocabulary"), std::string::npos);
}

TEST_F(CliTest, SynthWritesSplitsAndReport) {
  const auto r = run({"synth", "--out-dir", dir_.string(), "--sentences", "30", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("tokens\t", 0), 0u);
  for (const char* f : {"train.txt", "dev.txt", "test.txt"}) EXPECT_TRUE(fs::exists(dir_ / f));
  const auto bad = run({"synth", "--out-dir", dir_.string(), "--n-roots", "5"});
  EXPECT_EQ(bad.code, cli::kExitRuntime);
  EXPECT_NE(bad.err.find("gazetteer"), std::string::npos);
}

TEST_F(CliTest, AblateIsDeterministic) {
  const std::vector<std::string> args{"ablate", "--variants", "NN,NN+root", "--sentences", "40", "--min-length",
                                      "3", "--max-length", "5", "--epochs", "1", "--dim", "4", "--hidden", "8",
                                      "--quiet"};
  const auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 3);
  EXPECT_NE(a.out.find("\nNN\t"), std::string::npos);
  EXPECT_NE(a.out.find("\nNN+root\t"), std::string::npos);
  EXPECT_EQ(run(args).out, a.out);
}

}  // namespace
}  // namespace mcner
