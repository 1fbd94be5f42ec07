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

#include "mcner/evaluator.h"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>

namespace mcner {

std::vector<ChunkSpan> extract_chunks(std::span<const std::string> tags) {
  std::vector<ChunkSpan> chunks;
  std::optional<ChunkSpan> open;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const auto parts = parse_tag(tags[i]);
    if (!parts) throw Error("unknown tag '" + tags[i] + "'");
    if (open && (parts->prefix != 'I' || parts->type != open->type)) {
      open->end = i;
      chunks.push_back(std::move(*open));
      open.reset();
    }
    if (parts->prefix != 'O' && !open) open = ChunkSpan{parts->type, i, i};
  }
  if (open) {
    open->end = tags.size();
    chunks.push_back(std::move(*open));
  }
  return chunks;
}

std::vector<std::string> chunks_to_iob2(std::span<const ChunkSpan> chunks, std::size_t length) {
  std::vector<std::string> tags(length, "O");
  for (const auto& c : chunks) {
    if (c.start >= c.end || c.end > length) throw Error("chunk outside sentence");
    tags[c.start] = "B-" + c.type;
    for (std::size_t i = c.start + 1; i < c.end; ++i) tags[i] = "I-" + c.type;
  }
  return tags;
}

double ChunkCounts::precision() const {
  return found == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(found);
}

double ChunkCounts::recall() const {
  return gold == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(gold);
}

double ChunkCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

double EvalReport::accuracy() const {
  return tokens == 0 ? 0.0 : 100.0 * static_cast<double>(correct_tags) / static_cast<double>(tokens);
}

EvalReport evaluate(const std::vector<std::vector<std::string>>& gold,
                    const std::vector<std::vector<std::string>>& predicted) {
  if (gold.size() != predicted.size()) {
    throw Error("gold has " + std::to_string(gold.size()) + " sentences, prediction has " +
                std::to_string(predicted.size()));
  }
  EvalReport report;
  for (const char* type : {"LOC", "ORG", "PER"}) report.per_type[type];
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw Error("sentence " + std::to_string(s + 1) + ": gold has " + std::to_string(gold[s].size()) +
                  " tokens, prediction has " + std::to_string(predicted[s].size()));
    }
    report.tokens += gold[s].size();
    for (std::size_t i = 0; i < gold[s].size(); ++i) {
      report.correct_tags += gold[s][i] == predicted[s][i];
    }
    const auto g = extract_chunks(gold[s]);
    const auto p = extract_chunks(predicted[s]);
    const std::set<ChunkSpan> gold_set(g.begin(), g.end());
    for (const auto& c : g) ++report.per_type[c.type].gold;
    for (const auto& c : p) {
      auto& counts = report.per_type[c.type];
      ++counts.found;
      if (gold_set.count(c)) ++counts.correct;
    }
  }
  for (const auto& [type, counts] : report.per_type) {
    report.overall.gold += counts.gold;
    report.overall.found += counts.found;
    report.overall.correct += counts.correct;
  }
  return report;
}

EvalReport evaluate(std::span<const Sentence> gold,
                    const std::vector<std::vector<std::string>>& predicted) {
  std::vector<std::vector<std::string>> gold_tags;
  gold_tags.reserve(gold.size());
  for (const auto& s : gold) gold_tags.push_back(s.tags());
  return evaluate(gold_tags, predicted);
}

namespace {

std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string row(const std::string& label, const ChunkCounts& c) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%17s: precision: %6.2f%%; recall: %6.2f%%; FB1: %6.2f  %zu\n",
                label.c_str(), c.precision(), c.recall(), c.f1(), c.found);
  return buf;
}

}  // namespace

std::string format_conlleval(const EvalReport& report) {
  std::ostringstream out;
  out << "processed " << report.tokens << " tokens with " << report.overall.gold
      << " phrases; found: " << report.overall.found << " phrases; correct: "
      << report.overall.correct << ".\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "accuracy: %6.2f%%; precision: %6.2f%%; recall: %6.2f%%; FB1: %6.2f\n",
                report.accuracy(), report.overall.precision(), report.overall.recall(),
                report.overall.f1());
  out << buf;
  for (const auto& [type, counts] : report.per_type) out << row(type, counts);
  out << row("Overall", report.overall);
  return out.str();
}

std::string format_table(const EvalReport& report, char delimiter) {
  std::ostringstream out;
  const char d = delimiter;
  out << "type" << d << "gold" << d << "found" << d << "correct" << d << "precision" << d << "recall"
      << d << "f1\n";
  auto line = [&](const std::string& label, const ChunkCounts& c) {
    out << label << d << c.gold << d << c.found << d << c.correct << d << fixed2(c.precision()) << d
        << fixed2(c.recall()) << d << fixed2(c.f1()) << '\n';
  };
  for (const auto& [type, counts] : report.per_type) line(type, counts);
  line("Overall", report.overall);
  return out.str();
}

NeighborResult nearest_neighbors(const EmbeddingTable& table, const Dictionary& dictionary,
                                 std::string_view query, std::size_t k) {
  if (k < 1) throw Error("k must be >= 1");
  if (table.size() != dictionary.size()) throw Error("embedding table does not match its dictionary");
  const auto id = dictionary.find(query);
  if (!id || Dictionary::is_reserved(*id)) {
    throw OutOfVocabulary("'" + std::string(query) + "' is out of vocabulary");
  }
  const Vector q = table.lookup(*id);
  const double qnorm = q.norm();
  if (qnorm == 0.0) throw Error("query '" + std::string(query) + "' has a zero vector");

  NeighborResult result;
  std::vector<std::pair<double, int>> scored;
  for (int c = Dictionary::kReserved; c < table.size(); ++c) {
    if (c == *id) continue;
    const double norm = table.matrix().col(c).norm();
    if (norm == 0.0) {
      ++result.zero_norm_skipped;
      continue;
    }
    scored.emplace_back(q.dot(table.matrix().col(c)) / (qnorm * norm), c);
  }
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                    });
  for (std::size_t i = 0; i < n; ++i) {
    result.neighbors.push_back({dictionary.token(scored[i].second), scored[i].first});
  }
  return result;
}

}  // namespace mcner
