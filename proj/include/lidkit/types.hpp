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

#ifndef LIDKIT_TYPES_HPP
#define LIDKIT_TYPES_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lidkit {

/// Error type thrown by every operation in the toolkit. Messages name the
/// offending file/line/utterance where one exists.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One language in a classification task: its code plus the dense index
/// assigned when the label set was built.
struct LanguageId {
  std::string code;
  int index = -1;
};

/// Ordered set of language codes. The position of a code is its dense index;
/// all score vectors, confusion matrices and model outputs are aligned with
/// this order. Codes must be unique and nonempty.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> codes);

  int size() const { return static_cast<int>(codes_.size()); }
  bool empty() const { return codes_.empty(); }
  const std::string& code(int index) const;
  const std::vector<std::string>& codes() const { return codes_; }

  /// Index of a code, or -1 when absent.
  int IndexOf(const std::string& code) const;
  /// Index of a code; throws naming the code when absent.
  int Require(const std::string& code) const;
  bool Contains(const std::string& code) const { return IndexOf(code) >= 0; }

  LanguageId Language(int index) const { return {code(index), index}; }

  bool operator==(const LabelSet& other) const { return codes_ == other.codes_; }
  bool operator!=(const LabelSet& other) const { return !(*this == other); }

  /// True when the two sets contain the same codes, in any order.
  bool SameCodes(const LabelSet& other) const;

 private:
  std::vector<std::string> codes_;
  std::unordered_map<std::string, int> index_;
};

/// One utterance: transcripts keyed by the ASR system that produced them,
/// an optional language label and an optional accent/proficiency group.
struct Utterance {
  std::string id;
  std::map<std::string, std::string> transcripts;
  std::optional<std::string> label;
  std::optional<std::string> group;
  std::optional<double> duration_sec;

  /// Transcript under `asr_name`; throws naming the utterance when missing.
  const std::string& Transcript(const std::string& asr_name) const;
};

enum class ScoreSpace { kLogPosterior, kLogLikelihood, kRaw };

std::string ToString(ScoreSpace space);
ScoreSpace ScoreSpaceFromString(const std::string& s);

/// Per-language score vector for one utterance, aligned with a LabelSet.
struct ScoreVector {
  std::string utterance_id;
  std::vector<double> values;
  ScoreSpace space = ScoreSpace::kRaw;
};

/// Fixed-dimension real vector attached to one utterance.
struct EmbeddingVector {
  std::string utterance_id;
  std::vector<double> values;
};

}  // namespace lidkit

#endif  // LIDKIT_TYPES_HPP
