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

#include "lidkit/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "lidkit/util.hpp"

namespace lidkit {

namespace {

void ValidateWeights(const std::vector<double>& weights, size_t num_systems) {
  if (weights.size() != num_systems)
    throw Error("fusion weights count (" + std::to_string(weights.size()) +
                ") does not match the number of systems (" +
                std::to_string(num_systems) + ")");
  double sum = 0.0;
  bool any_positive = false;
  for (double w : weights) {
    if (w < 0.0) throw Error("fusion weights must be nonnegative");
    if (w > 0.0) any_positive = true;
    sum += w;
  }
  if (!any_positive) throw Error("at least one fusion weight must be positive");
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error("fusion weights must sum to 1, got " + FormatFloat(sum));
}

}  // namespace

FusionConfig FusionConfig::Uniform(size_t num_systems) {
  FusionConfig cfg;
  if (num_systems == 0) throw Error("cannot build fusion weights for zero systems");
  cfg.weights.assign(num_systems, 1.0 / static_cast<double>(num_systems));
  // Exact sum of 1 regardless of rounding.
  cfg.weights.back() = 1.0;
  for (size_t i = 0; i + 1 < num_systems; ++i) cfg.weights.back() -= cfg.weights[i];
  return cfg;
}

ScoreVector FuseLinear(const std::vector<ScoreVector>& inputs,
                       const FusionConfig& config) {
  if (inputs.empty()) throw Error("no score vectors to fuse");
  ValidateWeights(config.weights, inputs.size());
  const size_t k = inputs.front().values.size();
  const std::string& id = inputs.front().utterance_id;
  for (const ScoreVector& in : inputs) {
    if (in.space != ScoreSpace::kLogPosterior)
      throw Error("fusion inputs must be log_posterior vectors, got " +
                  ToString(in.space) + " for '" + in.utterance_id + "'");
    if (in.values.size() != k)
      throw Error("fusion inputs disagree on the number of languages");
    if (in.utterance_id != id)
      throw Error("fusion inputs belong to different utterances: '" + id + "' vs '" +
                  in.utterance_id + "'");
  }

  ScoreVector out;
  out.utterance_id = id;
  out.space = ScoreSpace::kLogPosterior;
  out.values.resize(k);

  if (config.log_domain) {
    for (size_t j = 0; j < k; ++j) {
      double v = 0.0;
      for (size_t i = 0; i < inputs.size(); ++i)
        v += config.weights[i] * inputs[i].values[j];
      out.values[j] = v;
    }
    double lse = LogSumExp(out.values);
    for (double& v : out.values) v -= lse;
    return out;
  }

  for (size_t j = 0; j < k; ++j) {
    // Mixture weighting in probability space; log-sum-exp keeps it stable
    // for very small posteriors.
    std::vector<double> terms;
    terms.reserve(inputs.size());
    for (size_t i = 0; i < inputs.size(); ++i) {
      if (config.weights[i] == 0.0) continue;
      terms.push_back(std::log(config.weights[i]) + inputs[i].values[j]);
    }
    out.values[j] = LogSumExp(terms);
  }
  if (config.normalize) {
    double lse = LogSumExp(out.values);
    for (double& v : out.values) v -= lse;
  }
  return out;
}

ScoreVector ToLogPosterior(const ScoreVector& scores) {
  if (scores.space == ScoreSpace::kRaw)
    throw Error("cannot normalize raw scores for '" + scores.utterance_id +
                "'; expected log_likelihood or log_posterior");
  ScoreVector out = scores;
  double lse = LogSumExp(out.values);
  for (double& v : out.values) v -= lse;
  out.space = ScoreSpace::kLogPosterior;
  return out;
}

EmbeddingVector LogProbFeatures(const ScoreVector& fused) {
  if (fused.space != ScoreSpace::kLogPosterior)
    throw Error("log-probability features require a log_posterior vector");
  EmbeddingVector out;
  out.utterance_id = fused.utterance_id;
  out.values = fused.values;
  return out;
}

ScoreVector FuseRoutes(const ScoreVector& acoustic, const ScoreVector& text,
                       const FusionConfig& config) {
  return FuseLinear({ToLogPosterior(acoustic), ToLogPosterior(text)}, config);
}

ScoreTable FuseTables(const std::vector<ScoreTable>& tables, const FusionConfig& config) {
  if (tables.empty()) throw Error("no score tables to fuse");
  const LabelSet& labels = tables.front().labels;

  std::vector<std::unordered_map<std::string, const ScoreVector*>> by_id(tables.size());
  std::vector<ScoreTable> aligned;
  aligned.reserve(tables.size());
  for (size_t t = 0; t < tables.size(); ++t) {
    if (!tables[t].labels.SameCodes(labels))
      throw Error("score tables do not share a label set");
    ScoreTable a;
    a.space = tables[t].space;
    a.labels = labels;
    if (tables[t].labels == labels) {
      a.rows = tables[t].rows;
    } else {
      a.rows.reserve(tables[t].rows.size());
      for (const ScoreVector& row : tables[t].rows) {
        ScoreVector r;
        r.utterance_id = row.utterance_id;
        r.space = row.space;
        r.values.resize(static_cast<size_t>(labels.size()));
        for (int j = 0; j < labels.size(); ++j)
          r.values[static_cast<size_t>(j)] =
              row.values[static_cast<size_t>(tables[t].labels.Require(labels.code(j)))];
        a.rows.push_back(std::move(r));
      }
    }
    aligned.push_back(std::move(a));
  }
  for (size_t t = 0; t < tables.size(); ++t)
    for (const ScoreVector& row : aligned[t].rows) by_id[t][row.utterance_id] = &row;

  ScoreTable out;
  out.space = ScoreSpace::kLogPosterior;
  out.labels = labels;
  for (const ScoreVector& lead : aligned.front().rows) {
    std::vector<ScoreVector> inputs;
    inputs.reserve(tables.size());
    for (size_t t = 0; t < tables.size(); ++t) {
      auto it = by_id[t].find(lead.utterance_id);
      if (it == by_id[t].end())
        throw Error("utterance '" + lead.utterance_id + "' missing from score table " +
                    std::to_string(t + 1));
      inputs.push_back(ToLogPosterior(*it->second));
    }
    out.rows.push_back(FuseLinear(inputs, config));
  }
  return out;
}

WeightSearchResult OptimizeRouteWeight(const ScoreTable& first, const ScoreTable& second,
                                       const std::vector<Utterance>& truth,
                                       double grid_step, bool allow_native_tuning) {
  if (truth.empty()) throw Error("no utterances to tune fusion weights on");
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw Error("grid step must be in (0, 1]");

  bool all_native = true;
  for (const Utterance& utt : truth)
    if (!utt.group || *utt.group != "native") {
      all_native = false;
      break;
    }
  if (all_native && !allow_native_tuning)
    throw Error(
        "refusing to optimize fusion weights on all-native data: tuned weights "
        "collapse into the route that wins on native speech (pass "
        "allow_native_tuning to override)");

  std::unordered_map<std::string, int> truth_index;
  for (const Utterance& utt : truth) {
    if (!utt.label) throw Error("utterance '" + utt.id + "' has no label");
    truth_index[utt.id] = first.labels.Require(*utt.label);
  }

  WeightSearchResult best;
  best.accuracy = -1.0;
  for (double w = 0.0; w <= 1.0 + 1e-12; w += grid_step) {
    double weight = std::min(w, 1.0);
    FusionConfig cfg;
    cfg.weights = {weight, 1.0 - weight};
    ScoreTable fused = FuseTables({first, second}, cfg);
    int64_t correct = 0, total = 0;
    for (const ScoreVector& row : fused.rows) {
      auto it = truth_index.find(row.utterance_id);
      if (it == truth_index.end()) continue;
      int arg = 0;
      for (size_t j = 1; j < row.values.size(); ++j)
        if (row.values[j] > row.values[static_cast<size_t>(arg)])
          arg = static_cast<int>(j);
      correct += (arg == it->second) ? 1 : 0;
      ++total;
    }
    if (total == 0) throw Error("no overlap between score tables and truth labels");
    double acc = static_cast<double>(correct) / static_cast<double>(total);
    if (acc > best.accuracy) {
      best.accuracy = acc;
      best.weight_first = weight;
    }
  }
  return best;
}

}  // namespace lidkit
