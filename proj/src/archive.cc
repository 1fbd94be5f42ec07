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

#include "mcner/archive.h"

#include <bit>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace mcner {
namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "mcner-archive";

struct Tensor {
  std::string name;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;
};

// Every tensor of the model in archive order.
std::vector<Tensor> tensors_of(Model& model) {
  std::vector<Tensor> out;
  auto& t = model.tables();
  for (auto [name, table] : {std::pair{"embeddings.words", &t.words}, {"embeddings.roots", &t.roots},
                             {"embeddings.tags", &t.tags}}) {
    out.push_back({name, table->matrix().data(), table->matrix().rows(), table->matrix().cols()});
  }
  for (const auto& p : model.dense_parameters()) out.push_back({p.name, p.data, p.rows, p.cols});
  return out;
}

json config_to_json(const ModelConfig& c) {
  return {
      {"window", c.window.window},
      {"word_dim", c.window.word_dim},
      {"root_dim", c.window.root_dim},
      {"tag_dim", c.window.tag_dim},
      {"use_root", c.window.use_root},
      {"use_tag_embedding", c.window.use_tag_embedding},
      {"use_features", c.window.use_features},
      {"architecture", to_string(c.network.architecture)},
      {"hidden_size", c.network.hidden_size},
      {"tensor_size", c.network.tensor_size},
      {"factors", c.network.factors},
      {"extra_hidden", c.network.extra_hidden},
      {"tag_count", c.network.tag_count},
  };
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.window.window = j.at("window").get<int>();
  c.window.word_dim = j.at("word_dim").get<int>();
  c.window.root_dim = j.at("root_dim").get<int>();
  c.window.tag_dim = j.at("tag_dim").get<int>();
  c.window.use_root = j.at("use_root").get<bool>();
  c.window.use_tag_embedding = j.at("use_tag_embedding").get<bool>();
  c.window.use_features = j.at("use_features").get<bool>();
  c.network.architecture = parse_architecture(j.at("architecture").get<std::string>());
  c.network.hidden_size = j.at("hidden_size").get<int>();
  c.network.tensor_size = j.at("tensor_size").get<int>();
  c.network.factors = j.at("factors").get<int>();
  c.network.extra_hidden = j.at("extra_hidden").get<int>();
  c.network.tag_count = j.at("tag_count").get<int>();
  return c;
}

// Entries after the reserved symbols.
json user_tokens(const std::vector<std::string>& tokens, std::size_t skip) {
  return std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(skip), tokens.end());
}

Dictionary dictionary_from(const json& j) {
  Dictionary d;
  for (const auto& token : j.get<std::vector<std::string>>()) {
    const int expected = d.size();
    if (d.add(token) != expected) {
      throw Error("archive dictionary repeats '" + token + "'");
    }
  }
  return d;
}

TagSet tagset_from(const json& j) {
  TagSet tags;
  for (const auto& name : j.get<std::vector<std::string>>()) {
    const int expected = tags.size();
    if (tags.add(name) != expected) throw Error("archive tag set repeats '" + name + "'");
  }
  return tags;
}

void put_doubles(std::ostream& out, const double* data, Eigen::Index count) {
  std::string bytes(static_cast<std::size_t>(count) * 8, '\0');
  for (Eigen::Index k = 0; k < count; ++k) {
    auto bits = std::bit_cast<std::uint64_t>(data[k]);
    for (int b = 0; b < 8; ++b) {
      bytes[static_cast<std::size_t>(k) * 8 + b] = static_cast<char>(bits & 0xFF);
      bits >>= 8;
    }
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void get_doubles(std::istream& in, double* data, Eigen::Index count, const std::string& name) {
  std::string bytes(static_cast<std::size_t>(count) * 8, '\0');
  in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw Error("archive truncated inside tensor " + name);
  }
  for (Eigen::Index k = 0; k < count; ++k) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) {
      bits = (bits << 8) | static_cast<unsigned char>(bytes[static_cast<std::size_t>(k) * 8 + b]);
    }
    data[k] = std::bit_cast<double>(bits);
  }
}

std::string read_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw Error(std::string("archive ends before the ") + what);
  return line;
}

}  // namespace

void save_archive(std::ostream& out, const ModelArchive& archive) {
  Model model = archive.model;
  const auto& v = model.vocab();
  json header;
  header["config"] = config_to_json(model.config());
  header["vocabulary"] = {
      {"words", user_tokens(v.words.tokens(), Dictionary::kReserved)},
      {"roots", user_tokens(v.roots.tokens(), Dictionary::kReserved)},
      {"tags", user_tokens(v.tags.names(), 1)},
      {"lowercase_words", v.lowercase_words},
  };
  // Bit pattern keeps dev F1 exact through the text header.
  header["metadata"] = {
      {"seed", archive.metadata.seed},
      {"best_epoch", archive.metadata.best_epoch},
      {"dev_f1_bits", std::bit_cast<std::uint64_t>(archive.metadata.dev_f1)},
  };
  const auto tensors = tensors_of(model);
  json shapes = json::array();
  for (const auto& t : tensors) shapes.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
  header["tensors"] = shapes;

  const std::string text = header.dump();
  out << kMagic << '\n' << "format " << kArchiveMajor << '.' << kArchiveMinor << '\n';
  out << "header " << text.size() << '\n' << text << '\n';
  for (const auto& t : tensors) put_doubles(out, t.data, t.rows * t.cols);
  if (!out) throw Error("failed to write archive");
}

void save_archive(const std::filesystem::path& path, const ModelArchive& archive) {
  std::ostringstream buffer;
  save_archive(buffer, archive);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const std::string bytes = buffer.str();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed to write " + path.string());
}

ModelArchive load_archive(std::istream& in) {
  if (read_line(in, "magic line") != kMagic) throw Error("not a model archive (bad magic line)");

  const std::string version = read_line(in, "format line");
  int major = -1;
  int minor = -1;
  if (std::sscanf(version.c_str(), "format %d.%d", &major, &minor) != 2) {
    throw Error("malformed archive format line '" + version + "'");
  }
  if (major != kArchiveMajor) {
    throw Error("archive format " + std::to_string(major) + "." + std::to_string(minor) +
                " is not readable by format " + std::to_string(kArchiveMajor) + " code");
  }

  const std::string size_line = read_line(in, "header size");
  std::size_t header_size = 0;
  if (std::sscanf(size_line.c_str(), "header %zu", &header_size) != 1) {
    throw Error("malformed archive header size line");
  }
  std::string text(header_size, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_size));
  if (static_cast<std::size_t>(in.gcount()) != header_size || in.get() != '\n') {
    throw Error("archive header is truncated");
  }

  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("archive header is not valid JSON: ") + e.what());
  }

  try {
    const ModelConfig config = config_from_json(header.at("config"));
    const auto& jv = header.at("vocabulary");
    Vocabulary vocab;
    vocab.words = dictionary_from(jv.at("words"));
    vocab.roots = dictionary_from(jv.at("roots"));
    vocab.tags = tagset_from(jv.at("tags"));
    vocab.lowercase_words = jv.at("lowercase_words").get<bool>();

    const auto& shapes = header.at("tensors");
    auto shape_of = [&](std::size_t k) {
      if (k >= shapes.size()) throw Error("archive lists too few tensors");
      return std::pair{shapes[k].at("rows").get<Eigen::Index>(), shapes[k].at("cols").get<Eigen::Index>()};
    };
    EmbeddingSet tables;
    {
      auto [r0, c0] = shape_of(0);
      auto [r1, c1] = shape_of(1);
      auto [r2, c2] = shape_of(2);
      tables.words = EmbeddingTable(static_cast<int>(r0), static_cast<int>(c0));
      tables.roots = EmbeddingTable(static_cast<int>(r1), static_cast<int>(c1));
      tables.tags = EmbeddingTable(static_cast<int>(r2), static_cast<int>(c2));
    }
    std::optional<TransitionMatrix> transitions;
    if (!config.pairwise()) transitions.emplace(config.network.tag_count);
    Model model(std::move(vocab), config, std::move(tables), Network(config.network, config.window.input_size()),
                std::move(transitions));

    const auto tensors = tensors_of(model);
    if (tensors.size() != shapes.size()) throw Error("archive tensor count does not match its config");
    for (std::size_t k = 0; k < tensors.size(); ++k) {
      const auto& t = tensors[k];
      const auto [rows, cols] = shape_of(k);
      if (shapes[k].at("name").get<std::string>() != t.name || rows != t.rows || cols != t.cols) {
        throw Error("archive tensor " + std::to_string(k) + " does not match the expected " + t.name + " " +
                    std::to_string(t.rows) + "x" + std::to_string(t.cols));
      }
      get_doubles(in, t.data, t.rows * t.cols, t.name);
    }
    if (in.peek() != std::char_traits<char>::eof()) throw Error("archive has trailing bytes");

    ModelArchive archive;
    archive.model = std::move(model);
    const auto& meta = header.at("metadata");
    archive.metadata.seed = meta.at("seed").get<std::uint64_t>();
    archive.metadata.best_epoch = meta.at("best_epoch").get<int>();
    archive.metadata.dev_f1 = std::bit_cast<double>(meta.at("dev_f1_bits").get<std::uint64_t>());
    return archive;
  } catch (const json::exception& e) {
    throw Error(std::string("archive header is incomplete: ") + e.what());
  }
}

ModelArchive load_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open archive " + path.string());
  return load_archive(in);
}

}  // namespace mcner
