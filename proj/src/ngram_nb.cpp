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

#include "lidkit/ngram_nb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "lidkit/util.hpp"

namespace lidkit {

std::string NormalizeText(std::string_view text, const NGramFeatureConfig& config) {
  std::vector<uint32_t> cps = DecodeUtf8(text);
  if (config.lowercase)
    for (uint32_t& cp : cps) cp = ToLowerCp(cp);
  std::string lowered = EncodeUtf8(cps);
  std::vector<std::string> words = SplitWhitespace(lowered);
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

std::vector<std::string> ExtractNgrams(std::string_view text,
                                       const NGramFeatureConfig& config) {
  if (config.n < 1) throw Error("n-gram order must be >= 1");
  const size_t n = static_cast<size_t>(config.n);
  std::string normalized = NormalizeText(text, config);
  std::vector<std::string> grams;
  for (const std::string& word : SplitWhitespace(normalized)) {
    std::vector<uint32_t> padded;
    padded.reserve(word.size() + 2);
    padded.push_back(' ');
    for (uint32_t cp : DecodeUtf8(word)) padded.push_back(cp);
    padded.push_back(' ');
    if (padded.size() < n) {
      grams.push_back(EncodeUtf8(padded));
      continue;
    }
    for (size_t i = 0; i + n <= padded.size(); ++i)
      grams.push_back(EncodeUtf8({padded.data() + i, n}));
  }
  return grams;
}

std::unordered_map<std::string, int64_t> CountNgrams(
    std::string_view text, const NGramFeatureConfig& config) {
  std::unordered_map<std::string, int64_t> counts;
  for (std::string& g : ExtractNgrams(text, config)) ++counts[std::move(g)];
  return counts;
}

NGramProfile NGramProfile::Train(const std::vector<Utterance>& data,
                                 const std::string& asr_name,
                                 const TrainOptions& options,
                                 const LabelSet& labels) {
  if (data.empty()) throw Error("cannot train on an empty utterance list");
  if (!(options.alpha > 0.0)) throw Error("smoothing alpha must be > 0");

  NGramProfile profile;
  profile.config_ = options.features;
  profile.alpha_ = options.alpha;

  if (labels.empty()) {
    std::set<std::string> codes;
    for (const Utterance& utt : data) {
      if (!utt.label)
        throw Error("utterance '" + utt.id + "' is unlabeled; training requires labels");
      codes.insert(*utt.label);
    }
    profile.labels_ = LabelSet(std::vector<std::string>(codes.begin(), codes.end()));
  } else {
    profile.labels_ = labels;
  }

  const int k = profile.labels_.size();
  profile.counts_.resize(static_cast<size_t>(k));
  profile.totals_.assign(static_cast<size_t>(k), 0);
  std::vector<int64_t> utterances_per_language(static_cast<size_t>(k), 0);

  for (const Utterance& utt : data) {
    if (!utt.label)
      throw Error("utterance '" + utt.id + "' is unlabeled; training requires labels");
    int lang = profile.labels_.IndexOf(*utt.label);
    if (lang < 0)
      throw Error("utterance '" + utt.id + "' has label '" + *utt.label +
                  "' outside the declared label set");
    const std::string& text = utt.Transcript(asr_name);
    auto& counts = profile.counts_[static_cast<size_t>(lang)];
    for (std::string& g : ExtractNgrams(text, profile.config_)) {
      ++profile.totals_[static_cast<size_t>(lang)];
      ++counts[std::move(g)];
    }
    ++utterances_per_language[static_cast<size_t>(lang)];
  }

  for (int l = 0; l < k; ++l)
    if (utterances_per_language[static_cast<size_t>(l)] == 0)
      throw Error("declared language '" + profile.labels_.code(l) +
                  "' has no training utterances");

  for (const auto& counts : profile.counts_)
    for (const auto& [gram, c] : counts)
      if (c > 0) profile.vocab_.insert(gram);

  profile.priors_.assign(static_cast<size_t>(k), 0.0);
  if (options.prior_mode == PriorMode::kUniform) {
    std::fill(profile.priors_.begin(), profile.priors_.end(), 1.0 / k);
  } else {
    double total = static_cast<double>(data.size());
    for (int l = 0; l < k; ++l)
      profile.priors_[static_cast<size_t>(l)] =
          static_cast<double>(utterances_per_language[static_cast<size_t>(l)]) / total;
  }
  return profile;
}

int64_t NGramProfile::count(int language, const std::string& gram) const {
  const auto& counts = counts_.at(static_cast<size_t>(language));
  auto it = counts.find(gram);
  return it == counts.end() ? 0 : it->second;
}

ScoreVector NGramProfile::Score(std::string_view text) const {
  const int k = labels_.size();
  const double v = static_cast<double>(vocab_.size());
  std::vector<double> scores(static_cast<size_t>(k));
  for (int l = 0; l < k; ++l)
    scores[static_cast<size_t>(l)] = std::log(priors_[static_cast<size_t>(l)]);

  std::vector<double> log_denominator(static_cast<size_t>(k));
  for (int l = 0; l < k; ++l)
    log_denominator[static_cast<size_t>(l)] =
        std::log(static_cast<double>(totals_[static_cast<size_t>(l)]) + alpha_ * v);

  for (const auto& [gram, multiplicity] : CountNgrams(text, config_)) {
    if (!vocab_.contains(gram)) continue;  // restrict to the training event space
    const double m = static_cast<double>(multiplicity);
    for (int l = 0; l < k; ++l) {
      double numer = static_cast<double>(count(l, gram)) + alpha_;
      scores[static_cast<size_t>(l)] +=
          m * (std::log(numer) - log_denominator[static_cast<size_t>(l)]);
    }
  }

  double lse = LogSumExp(scores);
  for (double& s : scores) s -= lse;

  ScoreVector result;
  result.values = std::move(scores);
  result.space = ScoreSpace::kLogPosterior;
  return result;
}

LanguageId NGramProfile::Classify(std::string_view text) const {
  ScoreVector s = Score(text);
  int best = 0;
  for (int l = 1; l < labels_.size(); ++l)
    if (s.values[static_cast<size_t>(l)] > s.values[static_cast<size_t>(best)])
      best = l;
  return labels_.Language(best);
}

void NGramProfile::CheckInvariants() const {
  const int k = labels_.size();
  if (static_cast<int>(counts_.size()) != k || static_cast<int>(totals_.size()) != k ||
      static_cast<int>(priors_.size()) != k)
    throw Error("profile arrays inconsistent with label set size");
  if (!(alpha_ > 0.0)) throw Error("alpha must be > 0");
  double prior_sum = 0.0;
  for (double p : priors_) prior_sum += p;
  if (std::abs(prior_sum - 1.0) > 1e-12)
    throw Error("priors do not sum to 1: " + FormatFloat(prior_sum));
  std::unordered_set<std::string> rebuilt;
  for (int l = 0; l < k; ++l) {
    int64_t total = 0;
    for (const auto& [gram, c] : counts_[static_cast<size_t>(l)]) {
      if (c < 0) throw Error("negative n-gram count");
      total += c;
      if (c > 0) rebuilt.insert(gram);
    }
    if (total != totals_[static_cast<size_t>(l)])
      throw Error("totals mismatch for language " + labels_.code(l));
  }
  if (rebuilt != vocab_) throw Error("vocabulary is not the union of language counts");
}

namespace {
constexpr const char* kProfileMagic = "lidkit-nb-profile";
constexpr int kProfileVersion = 1;
}  // namespace

void NGramProfile::Save(const std::string& path) const {
  std::string out;
  out += kProfileMagic;
  out += ' ';
  out += std::to_string(kProfileVersion);
  out += '\n';
  out += "n\t" + std::to_string(config_.n) + '\n';
  out += "lowercase\t" + std::to_string(config_.lowercase ? 1 : 0) + '\n';
  out += "alpha\t" + FormatFloat(alpha_) + '\n';
  out += "languages\t" + std::to_string(labels_.size()) + '\n';
  for (int l = 0; l < labels_.size(); ++l)
    out += "language\t" + labels_.code(l) + '\t' +
           FormatFloat(priors_[static_cast<size_t>(l)]) + '\n';
  for (int l = 0; l < labels_.size(); ++l) {
    // Tab-separated, grams sorted for a deterministic file. Grams contain no
    // tabs or newlines: normalization collapses all whitespace to ' '.
    std::map<std::string, int64_t> sorted(counts_[static_cast<size_t>(l)].begin(),
                                          counts_[static_cast<size_t>(l)].end());
    for (const auto& [gram, c] : sorted)
      out += "ngram\t" + labels_.code(l) + '\t' + gram + '\t' + std::to_string(c) + '\n';
  }
  AtomicWriteFile(path, out);
}

NGramProfile NGramProfile::Load(const std::string& path) {
  std::istringstream in(ReadFileOrThrow(path));
  std::string line;
  size_t line_no = 0;
  auto where = [&]() { return path + ":" + std::to_string(line_no); };
  auto next_line = [&]() {
    if (!std::getline(in, line)) throw Error(path + ": truncated profile");
    ++line_no;
  };

  next_line();
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kProfileMagic) throw Error(path + ": not an n-gram profile file");
    if (version != kProfileVersion)
      throw Error(path + ": unsupported profile version " + std::to_string(version));
  }

  NGramProfile profile;
  auto expect_kv = [&](const std::string& key) {
    next_line();
    std::vector<std::string> f = SplitTabs(line);
    if (f.size() != 2 || f[0] != key)
      throw Error(where() + ": expected '" + key + "<TAB>value'");
    return f[1];
  };
  profile.config_.n = static_cast<int>(ParseInt(expect_kv("n"), where()));
  profile.config_.lowercase = ParseInt(expect_kv("lowercase"), where()) != 0;
  profile.alpha_ = ParseDouble(expect_kv("alpha"), where());
  int k = static_cast<int>(ParseInt(expect_kv("languages"), where()));
  if (k < 1) throw Error(where() + ": language count must be >= 1");

  std::vector<std::string> codes;
  profile.priors_.clear();
  for (int l = 0; l < k; ++l) {
    next_line();
    std::vector<std::string> f = SplitTabs(line);
    if (f.size() != 3 || f[0] != "language")
      throw Error(where() + ": expected 'language<TAB>code<TAB>prior'");
    codes.push_back(f[1]);
    profile.priors_.push_back(ParseDouble(f[2], where()));
  }
  profile.labels_ = LabelSet(std::move(codes));
  profile.counts_.resize(static_cast<size_t>(k));
  profile.totals_.assign(static_cast<size_t>(k), 0);

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f = SplitTabs(line);
    if (f.size() != 4 || f[0] != "ngram")
      throw Error(where() + ": expected 'ngram<TAB>code<TAB>gram<TAB>count'");
    int lang = profile.labels_.Require(f[1]);
    int64_t c = ParseInt(f[3], where());
    if (c < 0) throw Error(where() + ": negative count");
    profile.counts_[static_cast<size_t>(lang)][f[2]] += c;
    profile.totals_[static_cast<size_t>(lang)] += c;
    if (c > 0) profile.vocab_.insert(f[2]);
  }
  profile.CheckInvariants();
  return profile;
}

}  // namespace lidkit
