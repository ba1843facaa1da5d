// Copyright 2026 The lidkit Authors
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
//
// Data model and file formats shared by every stage of the pipeline.
//
//   Manifest: one JSON record per line, UTF-8.
//     {"id": "u1", "transcripts": {"en": "hello"}, "label": "et",
//      "group": "native", "duration_sec": 3.2}
//     id is required; label, group and duration_sec are optional; transcripts
//     may be absent for records that only carry acoustic scores.
//
//   Score file (TSV):
//     #space log_posterior            <- or log_likelihood / raw
//     id <TAB> code1 <TAB> code2 ...
//     u1 <TAB> -0.3 <TAB> -1.2 ...
//
//   Embedding file (TSV):
//     id <TAB> dim=4
//     u1 <TAB> 0.1 <TAB> 0.2 <TAB> 0.3 <TAB> 0.4

#ifndef LIDKIT_CORPUS_HPP
#define LIDKIT_CORPUS_HPP

#include <map>
#include <string>
#include <vector>

#include "lidkit/types.hpp"

namespace lidkit {

/// Parses a manifest. Rejects duplicate ids (naming the id) and malformed
/// records (naming line number and field).
std::vector<Utterance> LoadManifest(const std::string& path);

/// Writes a manifest atomically; LoadManifest(SaveManifest(x)) == x.
void SaveManifest(const std::vector<Utterance>& data, const std::string& path);

/// Label set spanning the labeled utterances, codes in sorted order. Throws
/// when no utterance is labeled.
LabelSet LabelsFromData(const std::vector<Utterance>& data);

/// One code per line.
LabelSet LoadLabelSet(const std::string& path);
void SaveLabelSet(const LabelSet& labels, const std::string& path);

/// A parsed score file: one vector per utterance, all in the same space and
/// aligned with `labels`.
struct ScoreTable {
  ScoreSpace space = ScoreSpace::kRaw;
  LabelSet labels;
  std::vector<ScoreVector> rows;

  const ScoreVector& Row(const std::string& utterance_id) const;
  bool Has(const std::string& utterance_id) const;
};

/// Loads a score file in its own header order. All values must be finite;
/// log_posterior rows must satisfy logsumexp == 0 within 1e-6.
ScoreTable LoadScores(const std::string& path);

/// Loads and reindexes the columns into `labels` order; the header codes must
/// be a permutation of `labels`.
ScoreTable LoadScores(const std::string& path, const LabelSet& labels);

void SaveScores(const ScoreTable& table, const std::string& path);

struct EmbeddingTable {
  int dim = 0;
  std::vector<EmbeddingVector> rows;
};

EmbeddingTable LoadEmbeddings(const std::string& path);
void SaveEmbeddings(const EmbeddingTable& table, const std::string& path);

/// Reserved key for utterances without a group.
inline constexpr const char* kUngrouped = "ungrouped";

/// Exhaustive, disjoint partition by group; ungrouped utterances fall under
/// kUngrouped.
std::map<std::string, std::vector<Utterance>> SplitByGroup(
    const std::vector<Utterance>& data);

}  // namespace lidkit

#endif  // LIDKIT_CORPUS_HPP
