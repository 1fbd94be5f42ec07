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

#ifndef MCNER_CORPUS_H_
#define MCNER_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcner/common.h"

namespace mcner {

// Morphological column: Root, POS, InflSuffix, DerivSuffix, ProperNoun,
// KazNameSuffix.
inline constexpr std::size_t kMorphBits = 6;
using MorphBits = std::array<std::uint8_t, kMorphBits>;

struct Token {
  std::string surface;
  std::string root;
  MorphBits morph{};
  std::optional<std::string> tag;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool tagged() const;
  // Gold tags; throws if any token is untagged.
  std::vector<std::string> tags() const;

  bool operator==(const Sentence&) const = default;
};

enum class Column { kSurface, kRoot, kMorph, kTag };

// Column interpretation of a corpus file, e.g. "surface,root,morph,tag".
// A line carries either every schema column, or only the required ones
// (surface, plus the tag when the schema has one); omitted root and morph
// columns take their defaults.
class ColumnSchema {
 public:
  ColumnSchema();  // surface,root,morph,tag
  static ColumnSchema parse(std::string_view spec);

  const std::vector<Column>& columns() const { return columns_; }
  bool has(Column c) const;
  std::size_t required_count() const { return has(Column::kTag) ? 2 : 1; }
  std::string to_string() const;

 private:
  explicit ColumnSchema(std::vector<Column> columns);
  std::vector<Column> columns_;
};

struct ReadOptions {
  ColumnSchema schema;
  // Canonicalize IOB1 tag sequences to IOB2 while reading.
  bool iob1 = false;
};

std::vector<Sentence> parse_corpus(std::istream& in, const ReadOptions& options = {},
                                   const std::string& source = "<input>");
std::vector<Sentence> read_corpus(const std::filesystem::path& path,
                                  const ReadOptions& options = {});

// Writes SURFACE ROOT MORPHBITS [TAG] per token and a blank line after each
// sentence.
void write_corpus(std::ostream& out, std::span<const Sentence> sentences);
void write_corpus(const std::filesystem::path& path, std::span<const Sentence> sentences);

std::string format_morph(const MorphBits& bits);

// Last whitespace-separated column of every non-blank line, grouped into
// sentences. This is how predicted tags are read from tagger output.
std::vector<std::vector<std::string>> read_last_column(const std::filesystem::path& path);

// "O", "B-X" or "I-X".
struct TagParts {
  char prefix = 'O';
  std::string type;
};
std::optional<TagParts> parse_tag(std::string_view tag);

struct IobViolation {
  std::size_t position;
  std::string message;
};

// IOB2: every chunk opens with B-X; I-X only continues B-X or I-X.
std::optional<IobViolation> validate_iob(std::span<const std::string> tags);
std::vector<std::string> iob1_to_iob2(std::span<const std::string> tags);

// String <-> dense id map with three reserved symbols at ids 0..2.
class Dictionary {
 public:
  static constexpr int kUnknown = 0;
  static constexpr int kStart = 1;
  static constexpr int kEnd = 2;
  static constexpr int kReserved = 3;

  Dictionary();

  int add(const std::string& token);
  // Unknown strings map to kUnknown.
  int lookup(std::string_view token) const;
  std::optional<int> find(std::string_view token) const;
  const std::string& token(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  static bool is_reserved(int id) { return id >= 0 && id < kReserved; }

  bool operator==(const Dictionary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int, std::less<>> index_;
};

// Entity tag set. "O" always has id 0.
class TagSet {
 public:
  TagSet();

  int add(const std::string& tag);
  std::optional<int> find(std::string_view tag) const;
  // Throws Error for tags outside the set.
  int id(std::string_view tag) const;
  const std::string& name(int id) const;
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const TagSet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int, std::less<>> index_;
};

struct Vocabulary {
  Dictionary words;
  Dictionary roots;
  TagSet tags;
  bool lowercase_words = true;

  int word_id(std::string_view surface) const;
  int root_id(std::string_view root) const { return roots.lookup(root); }

  bool operator==(const Vocabulary&) const = default;
};

struct VocabularyOptions {
  bool lowercase_words = true;
  int min_count = 1;
};

// Words are lowercased (when requested) and cut at min_count; roots are kept
// in their original form. Tags are ordered O first, then by entity type with
// B- before I-.
Vocabulary build_vocabulary(std::span<const Sentence> train, const VocabularyOptions& options = {});

struct SplitRatios {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
};

struct CorpusSplit {
  std::vector<Sentence> train;
  std::vector<Sentence> dev;
  std::vector<Sentence> test;
};

// Largest-remainder apportionment of n sentences.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios);

// Random partition; each part keeps the original sentence order.
CorpusSplit split_corpus(std::span<const Sentence> sentences, const SplitRatios& ratios,
                         std::uint64_t seed);

}  // namespace mcner

#endif  // MCNER_CORPUS_H_
