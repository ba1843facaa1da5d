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

#include "lidkit/types.hpp"

namespace lidkit {

LabelSet::LabelSet(std::vector<std::string> codes) : codes_(std::move(codes)) {
  for (int i = 0; i < size(); ++i) {
    const std::string& c = codes_[static_cast<size_t>(i)];
    if (c.empty()) throw Error("empty language code in label set");
    if (!index_.emplace(c, i).second)
      throw Error("duplicate language code in label set: " + c);
  }
}

const std::string& LabelSet::code(int index) const {
  if (index < 0 || index >= size())
    throw Error("language index out of range: " + std::to_string(index));
  return codes_[static_cast<size_t>(index)];
}

int LabelSet::IndexOf(const std::string& code) const {
  auto it = index_.find(code);
  return it == index_.end() ? -1 : it->second;
}

int LabelSet::Require(const std::string& code) const {
  int i = IndexOf(code);
  if (i < 0) throw Error("unknown language code: " + code);
  return i;
}

bool LabelSet::SameCodes(const LabelSet& other) const {
  if (size() != other.size()) return false;
  for (const auto& c : codes_)
    if (!other.Contains(c)) return false;
  return true;
}

const std::string& Utterance::Transcript(const std::string& asr_name) const {
  auto it = transcripts.find(asr_name);
  if (it == transcripts.end())
    throw Error("utterance '" + id + "' has no transcript for ASR system '" +
                asr_name + "'");
  return it->second;
}

std::string ToString(ScoreSpace space) {
  switch (space) {
    case ScoreSpace::kLogPosterior: return "log_posterior";
    case ScoreSpace::kLogLikelihood: return "log_likelihood";
    case ScoreSpace::kRaw: return "raw";
  }
  return "raw";
}

ScoreSpace ScoreSpaceFromString(const std::string& s) {
  if (s == "log_posterior") return ScoreSpace::kLogPosterior;
  if (s == "log_likelihood") return ScoreSpace::kLogLikelihood;
  if (s == "raw") return ScoreSpace::kRaw;
  throw Error("unknown score space: '" + s + "'");
}

}  // namespace lidkit
