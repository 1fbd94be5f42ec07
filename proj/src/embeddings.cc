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

#include "mcner/embeddings.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "mcner/utf8.h"

namespace mcner {

void EmbeddingTable::check_index(int index) const {
  if (index < 0 || index >= size()) {
    throw Error("embedding index " + std::to_string(index) + " outside table of " +
                std::to_string(size()) + " columns");
  }
}

Matrix::ConstColXpr EmbeddingTable::lookup(int index) const {
  check_index(index);
  return matrix_.col(index);
}

Matrix::ColXpr EmbeddingTable::column(int index) {
  check_index(index);
  return matrix_.col(index);
}

void WindowConfig::validate() const {
  if (window < 1 || window % 2 == 0) throw Error("window size must be odd and >= 1");
  if (word_dim < 1 || root_dim < 1 || tag_dim < 1) throw Error("embedding sizes must be >= 1");
}

EmbeddingSet EmbeddingSet::create(const Vocabulary& vocab, const WindowConfig& config, Rng& rng) {
  config.validate();
  EmbeddingSet set;
  set.words = EmbeddingTable(config.word_dim, vocab.words.size());
  rng.fill_uniform(set.words.matrix(), kEmbeddingInitScale);
  if (config.use_root) {
    set.roots = EmbeddingTable(config.root_dim, vocab.roots.size());
    rng.fill_uniform(set.roots.matrix(), kEmbeddingInitScale);
  }
  if (config.use_tag_embedding) {
    set.tags = EmbeddingTable(config.tag_dim, vocab.tags.size() + 1);
    rng.fill_uniform(set.tags.matrix(), kEmbeddingInitScale);
  }
  return set;
}

void EmbeddingSet::check(const Vocabulary& vocab, const WindowConfig& config) const {
  auto expect = [](const EmbeddingTable& t, int dim, int size, const char* name) {
    if (t.dim() != dim || t.size() != size) {
      throw Error(std::string(name) + " table is " + std::to_string(t.dim()) + "x" +
                  std::to_string(t.size()) + ", expected " + std::to_string(dim) + "x" +
                  std::to_string(size));
    }
  };
  expect(words, config.word_dim, vocab.words.size(), "word");
  if (config.use_root) expect(roots, config.root_dim, vocab.roots.size(), "root");
  if (config.use_tag_embedding) expect(tags, config.tag_dim, vocab.tags.size() + 1, "tag");
}

bool EmbeddingSet::operator==(const EmbeddingSet& other) const {
  return words.matrix() == other.words.matrix() && roots.matrix() == other.roots.matrix() &&
         tags.matrix() == other.tags.matrix();
}

EncodedSentence encode(const Sentence& sentence, const Vocabulary& vocab) {
  EncodedSentence out(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    out[i].word = vocab.word_id(sentence.tokens[i].surface);
    out[i].root = vocab.root_id(sentence.tokens[i].root);
    out[i].features = extract_features(sentence, i);
  }
  return out;
}

std::vector<int> encode_tags(const Sentence& sentence, const Vocabulary& vocab) {
  std::vector<int> ids;
  ids.reserve(sentence.size());
  for (const auto& token : sentence.tokens) {
    if (!token.tag) throw Error("token '" + token.surface + "' has no gold tag");
    ids.push_back(vocab.tags.id(*token.tag));
  }
  return ids;
}

int window_word(const EncodedSentence& sentence, int position, int offset) {
  const int p = position + offset;
  if (p < 0) return Dictionary::kStart;
  if (p >= static_cast<int>(sentence.size())) return Dictionary::kEnd;
  return sentence[p].word;
}

void build_input(const EncodedSentence& sentence, int position, int prev_tag,
                 const EmbeddingSet& tables, const WindowConfig& config, Vector& out) {
  if (position < 0 || position >= static_cast<int>(sentence.size())) {
    throw Error("input position " + std::to_string(position) + " outside sentence");
  }
  if (tables.words.dim() != config.word_dim ||
      (config.use_root && tables.roots.dim() != config.root_dim) ||
      (config.use_tag_embedding && tables.tags.dim() != config.tag_dim)) {
    throw Error("embedding tables do not match the window config");
  }
  out.resize(config.input_size());
  const int half = config.half_window();
  for (int j = -half; j <= half; ++j) {
    out.segment((j + half) * config.word_dim, config.word_dim) =
        tables.words.lookup(window_word(sentence, position, j));
  }
  if (config.use_root) {
    out.segment(config.root_offset(), config.root_dim) = tables.roots.lookup(sentence[position].root);
  }
  if (config.use_tag_embedding) {
    out.segment(config.tag_offset(), config.tag_dim) = tables.tags.lookup(prev_tag);
  }
  if (config.use_features) {
    const int base = config.feature_offset();
    for (int j = -half; j <= half; ++j) {
      const int p = position + j;
      const int slot = base + (j + half) * static_cast<int>(kFeatureCount);
      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        const bool inside = p >= 0 && p < static_cast<int>(sentence.size());
        out[slot + static_cast<int>(f)] = inside ? sentence[p].features[f] : 0.0;
      }
    }
  }
}

Vector build_input(const EncodedSentence& sentence, int position, int prev_tag,
                   const EmbeddingSet& tables, const WindowConfig& config) {
  Vector out;
  build_input(sentence, position, prev_tag, tables, config, out);
  return out;
}

Vector build_input(const Sentence& sentence, int position, int prev_tag, const Vocabulary& vocab,
                   const EmbeddingSet& tables, const WindowConfig& config) {
  return build_input(encode(sentence, vocab), position, prev_tag, tables, config);
}

void EmbeddingGradients::clear() {
  words.clear();
  roots.clear();
  tags.clear();
}

namespace {

void accumulate(std::map<int, Vector>& grads, int id, const Eigen::Ref<const Vector>& g) {
  auto [it, inserted] = grads.try_emplace(id, g);
  if (!inserted) it->second += g;
}

}  // namespace

void route_input_gradient(const Vector& input_gradient, const EncodedSentence& sentence,
                          int position, int prev_tag, const WindowConfig& config,
                          EmbeddingGradients& grads) {
  const int half = config.half_window();
  for (int j = -half; j <= half; ++j) {
    accumulate(grads.words, window_word(sentence, position, j),
               input_gradient.segment((j + half) * config.word_dim, config.word_dim));
  }
  if (config.use_root) {
    accumulate(grads.roots, sentence[position].root,
               input_gradient.segment(config.root_offset(), config.root_dim));
  }
  if (config.use_tag_embedding) {
    accumulate(grads.tags, prev_tag, input_gradient.segment(config.tag_offset(), config.tag_dim));
  }
}

// word2vec text ----------------------------------------------------------------

namespace {

std::vector<std::string> fields_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> fields;
  std::string f;
  while (in >> f) fields.push_back(f);
  return fields;
}

long parse_int(const std::string& s, const std::string& source, std::size_t line) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(source, line, "malformed integer '" + s + "'");
  }
  return value;
}

}  // namespace

PretrainedCoverage load_pretrained(const std::filesystem::path& path, EmbeddingTable& table,
                                   const Dictionary& dictionary, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding file '" + path.string() + "'");
  const std::string source = path.string();
  if (table.size() != dictionary.size()) {
    throw Error("embedding table does not match its dictionary");
  }

  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  const auto header = fields_of(line);
  if (header.size() != 2) throw ParseError(source, 1, "header must be '<count> <dim>'");
  const long count = parse_int(header[0], source, 1);
  const long dim = parse_int(header[1], source, 1);
  if (dim != table.dim()) {
    throw Error("embedding dimension mismatch: file has " + std::to_string(dim) +
                ", table expects " + std::to_string(table.dim()));
  }

  std::map<int, Vector> rows;
  PretrainedCoverage coverage;
  long seen = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = fields_of(line);
    if (fields.empty()) continue;
    ++seen;
    if (static_cast<long>(fields.size()) != dim + 1) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(dim) + " values, got " +
                           std::to_string(fields.size() - 1));
    }
    Vector v(dim);
    for (long k = 0; k < dim; ++k) {
      const std::string& s = fields[k + 1];
      double x = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) {
        throw ParseError(source, line_no, "malformed float '" + s + "'");
      }
      v[k] = x;
    }
    const auto id = dictionary.find(lowercase ? utf8::lowercase(fields[0]) : fields[0]);
    if (!id || Dictionary::is_reserved(*id)) {
      ++coverage.ignored;
      continue;
    }
    rows.try_emplace(*id, std::move(v));  // first occurrence wins
  }
  if (seen != count) {
    throw ParseError(source, line_no,
                     "header announces " + std::to_string(count) + " rows, file has " +
                         std::to_string(seen));
  }

  for (const auto& [id, v] : rows) table.column(id) = v;
  coverage.found = static_cast<int>(rows.size());
  coverage.missing = dictionary.size() - Dictionary::kReserved - coverage.found;
  return coverage;
}

void save_pretrained(const std::filesystem::path& path, const EmbeddingTable& table,
                     const Dictionary& dictionary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write embedding file '" + path.string() + "'");
  out << (dictionary.size() - Dictionary::kReserved) << ' ' << table.dim() << '\n';
  char buf[64];
  for (int id = Dictionary::kReserved; id < dictionary.size(); ++id) {
    out << dictionary.token(id);
    for (int k = 0; k < table.dim(); ++k) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), table.matrix()(k, id));
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

}  // namespace mcner
