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

#include "mcner/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "mcner/common.h"
#include "mcner/utf8.h"

namespace mcner {
namespace {

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; });
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

bool Sentence::tagged() const {
  return !tokens.empty() &&
         std::all_of(tokens.begin(), tokens.end(), [](const Token& t) { return t.tag.has_value(); });
}

std::vector<std::string> Sentence::tags() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!t.tag) throw Error("sentence has untagged token '" + t.surface + "'");
    out.push_back(*t.tag);
  }
  return out;
}

// ColumnSchema ---------------------------------------------------------------

ColumnSchema::ColumnSchema()
    : columns_{Column::kSurface, Column::kRoot, Column::kMorph, Column::kTag} {}

ColumnSchema::ColumnSchema(std::vector<Column> columns) : columns_(std::move(columns)) {}

ColumnSchema ColumnSchema::parse(std::string_view spec) {
  std::vector<Column> columns;
  std::set<Column> seen;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    const std::string_view name = spec.substr(start, end - start);
    Column c;
    if (name == "surface") {
      c = Column::kSurface;
    } else if (name == "root") {
      c = Column::kRoot;
    } else if (name == "morph") {
      c = Column::kMorph;
    } else if (name == "tag") {
      c = Column::kTag;
    } else {
      throw Error("unknown schema column '" + std::string(name) + "'");
    }
    if (!seen.insert(c).second) throw Error("duplicate schema column '" + std::string(name) + "'");
    columns.push_back(c);
    start = end + 1;
  }
  if (columns.empty() || columns.front() != Column::kSurface) {
    throw Error("schema must start with 'surface'");
  }
  if (seen.count(Column::kTag) && columns.back() != Column::kTag) {
    throw Error("schema 'tag' column must be last");
  }
  return ColumnSchema(std::move(columns));
}

bool ColumnSchema::has(Column c) const {
  return std::find(columns_.begin(), columns_.end(), c) != columns_.end();
}

std::string ColumnSchema::to_string() const {
  std::string out;
  for (Column c : columns_) {
    if (!out.empty()) out += ',';
    switch (c) {
      case Column::kSurface: out += "surface"; break;
      case Column::kRoot: out += "root"; break;
      case Column::kMorph: out += "morph"; break;
      case Column::kTag: out += "tag"; break;
    }
  }
  return out;
}

// Reading and writing --------------------------------------------------------

namespace {

Token parse_token(const std::vector<std::string_view>& fields, const ColumnSchema& schema,
                  const std::string& source, std::size_t line_no) {
  const auto& columns = schema.columns();
  Token token;
  auto assign = [&](Column c, std::string_view value) {
    switch (c) {
      case Column::kSurface:
        token.surface = std::string(value);
        break;
      case Column::kRoot:
        token.root = std::string(value);
        break;
      case Column::kMorph:
        if (value.size() != kMorphBits) {
          throw ParseError(source, line_no,
                           "morph column must have " + std::to_string(kMorphBits) + " bits, got '" +
                               std::string(value) + "'");
        }
        for (std::size_t i = 0; i < kMorphBits; ++i) {
          if (value[i] != '0' && value[i] != '1') {
            throw ParseError(source, line_no, "non-binary morph bit in '" + std::string(value) + "'");
          }
          token.morph[i] = static_cast<std::uint8_t>(value[i] - '0');
        }
        break;
      case Column::kTag:
        if (!parse_tag(value)) {
          throw ParseError(source, line_no, "invalid tag '" + std::string(value) + "'");
        }
        token.tag = std::string(value);
        break;
    }
  };

  if (fields.size() == columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) assign(columns[i], fields[i]);
  } else if (fields.size() == schema.required_count()) {
    assign(Column::kSurface, fields.front());
    if (schema.has(Column::kTag)) assign(Column::kTag, fields.back());
  } else {
    throw ParseError(source, line_no,
                     "expected " + std::to_string(columns.size()) + " or " +
                         std::to_string(schema.required_count()) + " columns (" + schema.to_string() +
                         "), got " + std::to_string(fields.size()));
  }
  if (token.root.empty()) token.root = utf8::lowercase(token.surface);
  return token;
}

void finish_sentence(Sentence& sentence, std::size_t first_line, const ReadOptions& options,
                     const std::string& source, std::vector<Sentence>& out) {
  if (sentence.tokens.empty()) return;
  if (sentence.tagged()) {
    auto tags = sentence.tags();
    if (options.iob1) {
      tags = iob1_to_iob2(tags);
      for (std::size_t i = 0; i < tags.size(); ++i) sentence.tokens[i].tag = tags[i];
    }
    if (auto violation = validate_iob(tags)) {
      throw ParseError(source, first_line + violation->position, violation->message);
    }
  }
  out.push_back(std::move(sentence));
  sentence = Sentence{};
}

}  // namespace

std::vector<Sentence> parse_corpus(std::istream& in, const ReadOptions& options,
                                   const std::string& source) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::size_t line_no = 0;
  std::size_t first_line = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) {
      finish_sentence(current, first_line, options, source, sentences);
      continue;
    }
    if (current.tokens.empty()) first_line = line_no;
    current.tokens.push_back(parse_token(split_whitespace(line), options.schema, source, line_no));
  }
  finish_sentence(current, first_line, options, source, sentences);
  return sentences;
}

std::vector<Sentence> read_corpus(const std::filesystem::path& path, const ReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path.string() + "'");
  return parse_corpus(in, options, path.string());
}

std::string format_morph(const MorphBits& bits) {
  std::string out(kMorphBits, '0');
  for (std::size_t i = 0; i < kMorphBits; ++i) out[i] = bits[i] ? '1' : '0';
  return out;
}

void write_corpus(std::ostream& out, std::span<const Sentence> sentences) {
  for (const auto& sentence : sentences) {
    for (const auto& token : sentence.tokens) {
      out << token.surface << ' ' << token.root << ' ' << format_morph(token.morph);
      if (token.tag) out << ' ' << *token.tag;
      out << '\n';
    }
    out << '\n';
  }
}

void write_corpus(const std::filesystem::path& path, std::span<const Sentence> sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file '" + path.string() + "'");
  write_corpus(out, sentences);
}

std::vector<std::vector<std::string>> read_last_column(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file '" + path.string() + "'");
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> current;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (is_blank(line)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
      continue;
    }
    current.emplace_back(split_whitespace(line).back());
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

// IOB ------------------------------------------------------------------------

std::optional<TagParts> parse_tag(std::string_view tag) {
  if (tag == "O") return TagParts{'O', ""};
  if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) return std::nullopt;
  return TagParts{tag[0], std::string(tag.substr(2))};
}

std::optional<IobViolation> validate_iob(std::span<const std::string> tags) {
  std::string open_type;  // empty when outside a chunk
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const auto parts = parse_tag(tags[i]);
    if (!parts) return IobViolation{i, "invalid tag '" + tags[i] + "'"};
    if (parts->prefix == 'I') {
      if (open_type.empty()) {
        return IobViolation{i, "'" + tags[i] + "' does not continue a chunk"};
      }
      if (open_type != parts->type) {
        return IobViolation{i, "'" + tags[i] + "' continues a " + open_type + " chunk"};
      }
    }
    open_type = parts->type;
  }
  return std::nullopt;
}

std::vector<std::string> iob1_to_iob2(std::span<const std::string> tags) {
  std::vector<std::string> out(tags.begin(), tags.end());
  std::string prev_type;
  for (auto& tag : out) {
    const auto parts = parse_tag(tag);
    if (!parts) throw Error("invalid tag '" + tag + "'");
    if (parts->prefix == 'I' && parts->type != prev_type) tag = "B-" + parts->type;
    prev_type = parts->type;
  }
  return out;
}

// Dictionary and TagSet ------------------------------------------------------

Dictionary::Dictionary() {
  for (const char* reserved : {"<UNK>", "<START>", "<END>"}) add(reserved);
}

int Dictionary::add(const std::string& token) {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  const int id = size();
  tokens_.push_back(token);
  index_.emplace(token, id);
  return id;
}

int Dictionary::lookup(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnknown : it->second;
}

std::optional<int> Dictionary::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Dictionary::token(int id) const {
  if (id < 0 || id >= size()) throw Error("dictionary id " + std::to_string(id) + " out of range");
  return tokens_[id];
}

TagSet::TagSet() { add("O"); }

int TagSet::add(const std::string& tag) {
  if (auto it = index_.find(tag); it != index_.end()) return it->second;
  const int id = size();
  names_.push_back(tag);
  index_.emplace(tag, id);
  return id;
}

std::optional<int> TagSet::find(std::string_view tag) const {
  auto it = index_.find(tag);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int TagSet::id(std::string_view tag) const {
  auto found = find(tag);
  if (!found) throw Error("tag '" + std::string(tag) + "' is not in the tag set");
  return *found;
}

const std::string& TagSet::name(int id) const {
  if (id < 0 || id >= size()) throw Error("tag id " + std::to_string(id) + " out of range");
  return names_[id];
}

int Vocabulary::word_id(std::string_view surface) const {
  if (!lowercase_words) return words.lookup(surface);
  return words.lookup(utf8::lowercase(surface));
}

Vocabulary build_vocabulary(std::span<const Sentence> train, const VocabularyOptions& options) {
  std::map<std::string, int> word_counts;
  std::set<std::string> roots;
  std::set<std::string> tags;
  for (const auto& sentence : train) {
    for (const auto& token : sentence.tokens) {
      ++word_counts[options.lowercase_words ? utf8::lowercase(token.surface) : token.surface];
      roots.insert(token.root);
      if (token.tag) tags.insert(*token.tag);
    }
  }

  Vocabulary vocab;
  vocab.lowercase_words = options.lowercase_words;
  for (const auto& [word, count] : word_counts) {
    if (count >= options.min_count) vocab.words.add(word);
  }
  for (const auto& root : roots) vocab.roots.add(root);

  std::vector<std::string> ordered(tags.begin(), tags.end());
  auto key = [](const std::string& tag) {
    const auto parts = parse_tag(tag);
    if (!parts) return std::make_pair(tag, 'Z');
    return std::make_pair(parts->type, parts->prefix);
  };
  std::sort(ordered.begin(), ordered.end(),
            [&](const std::string& a, const std::string& b) { return key(a) < key(b); });
  for (const auto& tag : ordered) vocab.tags.add(tag);
  return vocab;
}

// Splitting ------------------------------------------------------------------

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios) {
  const std::array<double, 3> r{ratios.train, ratios.dev, ratios.test};
  for (double x : r) {
    if (!(x >= 0.0)) throw Error("split ratios must be non-negative");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) throw Error("split ratios must sum to 1");

  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = r[i] * static_cast<double>(n);
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

CorpusSplit split_corpus(std::span<const Sentence> sentences, const SplitRatios& ratios,
                         std::uint64_t seed) {
  if (sentences.size() < 3) throw Error("cannot split fewer than 3 sentences");
  const auto sizes = split_sizes(sentences.size(), ratios);

  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());

  std::vector<int> part(sentences.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    part[order[k]] = k < sizes[0] ? 0 : (k < sizes[0] + sizes[1] ? 1 : 2);
  }
  CorpusSplit split;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto& target = part[i] == 0 ? split.train : (part[i] == 1 ? split.dev : split.test);
    target.push_back(sentences[i]);
  }
  return split;
}

}  // namespace mcner
