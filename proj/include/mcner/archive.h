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

#ifndef MCNER_ARCHIVE_H_
#define MCNER_ARCHIVE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "mcner/model.h"

namespace mcner {

struct TrainingMetadata {
  std::uint64_t seed = 0;
  int best_epoch = 0;
  double dev_f1 = 0.0;

  bool operator==(const TrainingMetadata&) const = default;
};

struct ModelArchive {
  Model model;
  TrainingMetadata metadata;

  bool operator==(const ModelArchive&) const = default;
};

inline constexpr int kArchiveMajor = 1;
inline constexpr int kArchiveMinor = 0;

// Layout: "mcner-archive\n", "format <major>.<minor>\n", "header <bytes>\n",
// a JSON header (vocabularies, config, metadata, tensor names and shapes),
// then every tensor as column-major little-endian IEEE doubles. The same
// model always serializes to the same bytes.
void save_archive(std::ostream& out, const ModelArchive& archive);
void save_archive(const std::filesystem::path& path, const ModelArchive& archive);

// Throws Error on a bad magic line, a different major version, truncation or
// shapes that do not match the stored config.
ModelArchive load_archive(std::istream& in);
ModelArchive load_archive(const std::filesystem::path& path);

}  // namespace mcner

#endif  // MCNER_ARCHIVE_H_
