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

#include "lidkit/eval.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "lidkit/util.hpp"

namespace lidkit {

int ArgmaxIndex(const ScoreVector& row) {
  if (row.values.empty()) throw Error("empty score vector for '" + row.utterance_id + "'");
  int best = 0;
  for (size_t j = 1; j < row.values.size(); ++j)
    if (row.values[j] > row.values[static_cast<size_t>(best)]) best = static_cast<int>(j);
  return best;
}

EvalReport Evaluate(const std::vector<std::pair<std::string, int>>& predictions,
                    const std::vector<Utterance>& truth, const LabelSet& labels) {
  if (predictions.empty()) throw Error("no predictions to evaluate");
  const int k = labels.size();

  std::unordered_map<std::string, const Utterance*> by_id;
  for (const Utterance& utt : truth) by_id[utt.id] = &utt;

  EvalReport report;
  report.labels = labels;
  report.confusion.assign(static_cast<size_t>(k),
                          std::vector<int64_t>(static_cast<size_t>(k), 0));

  struct GroupCount {
    int64_t n = 0;
    int64_t correct = 0;
  };
  std::map<std::string, GroupCount> groups;
  int64_t correct_total = 0;

  for (const auto& [id, predicted] : predictions) {
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw Error("prediction for unknown utterance id '" + id + "'");
    const Utterance& utt = *it->second;
    if (!utt.label) throw Error("utterance '" + id + "' has no truth label");
    int actual = labels.Require(*utt.label);
    if (predicted < 0 || predicted >= k)
      throw Error("predicted index out of range for utterance '" + id + "'");
    ++report.confusion[static_cast<size_t>(actual)][static_cast<size_t>(predicted)];
    ++report.n_total;
    bool hit = (actual == predicted);
    correct_total += hit ? 1 : 0;
    GroupCount& g = groups[utt.group ? *utt.group : std::string(kUngrouped)];
    ++g.n;
    g.correct += hit ? 1 : 0;
  }

  report.overall_accuracy =
      static_cast<double>(correct_total) / static_cast<double>(report.n_total);
  for (const auto& [name, g] : groups)
    report.per_group[name] = {g.n, static_cast<double>(g.correct) /
                                       static_cast<double>(g.n)};
  return report;
}

EvalReport EvaluateScores(const ScoreTable& scores, const std::vector<Utterance>& truth) {
  std::vector<std::pair<std::string, int>> predictions;
  predictions.reserve(scores.rows.size());
  for (const ScoreVector& row : scores.rows)
    predictions.emplace_back(row.utterance_id, ArgmaxIndex(row));
  return Evaluate(predictions, truth, scores.labels);
}

double RelativeErrorReduction(double baseline_acc, double improved_acc) {
  if (!(baseline_acc >= 0.0 && baseline_acc <= 1.0) ||
      !(improved_acc >= 0.0 && improved_acc <= 1.0))
    throw Error("accuracies must lie in [0, 1]");
  if (baseline_acc == 1.0)
    throw Error("relative error reduction is undefined for a perfect baseline");
  double baseline_err = 1.0 - baseline_acc;
  double improved_err = 1.0 - improved_acc;
  return (baseline_err - improved_err) / baseline_err;
}

std::string EvalReport::ToText() const {
  std::ostringstream out;
  out << "utterances\t" << n_total << '\n';
  out << "accuracy\t" << FormatFloat(overall_accuracy) << '\n';
  out << '\n' << "per-group accuracy:\n";
  for (const auto& [name, stat] : per_group)
    out << "  " << name << "\tn=" << stat.n << "\taccuracy=" << FormatFloat(stat.accuracy)
        << '\n';
  out << '\n' << "confusion (rows = truth, columns = predicted):\n";
  out << "  ";
  for (int j = 0; j < labels.size(); ++j) out << '\t' << labels.code(j);
  out << '\n';
  for (int i = 0; i < labels.size(); ++i) {
    out << "  " << labels.code(i);
    for (int j = 0; j < labels.size(); ++j)
      out << '\t' << confusion[static_cast<size_t>(i)][static_cast<size_t>(j)];
    out << '\n';
  }
  return out.str();
}

std::string EvalReport::ToJson() const {
  nlohmann::json j;
  j["n_total"] = n_total;
  j["overall_accuracy"] = overall_accuracy;
  j["labels"] = labels.codes();
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [name, stat] : per_group)
    groups[name] = {{"n", stat.n}, {"accuracy", stat.accuracy}};
  j["per_group"] = groups;
  j["confusion"] = confusion;
  return j.dump(2) + "\n";
}

}  // namespace lidkit
