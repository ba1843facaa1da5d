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

#include "lidkit/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "lidkit/util.hpp"

namespace lidkit {

namespace {

using nlohmann::json;

std::string LineContext(const std::string& path, size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

Utterance ParseManifestRecord(const json& rec, const std::string& where) {
  if (!rec.is_object()) throw Error(where + ": record is not an object");
  Utterance utt;
  if (!rec.contains("id") || !rec["id"].is_string() ||
      rec["id"].get<std::string>().empty())
    throw Error(where + ": field 'id' missing or not a nonempty string");
  utt.id = rec["id"].get<std::string>();
  if (rec.contains("transcripts")) {
    const json& tr = rec["transcripts"];
    if (!tr.is_object())
      throw Error(where + ": field 'transcripts' must be an object");
    for (auto it = tr.begin(); it != tr.end(); ++it) {
      if (!it.value().is_string())
        throw Error(where + ": field 'transcripts." + it.key() +
                    "' must be a string");
      utt.transcripts[it.key()] = it.value().get<std::string>();
    }
  }
  if (rec.contains("label") && !rec["label"].is_null()) {
    if (!rec["label"].is_string())
      throw Error(where + ": field 'label' must be a string");
    utt.label = rec["label"].get<std::string>();
  }
  if (rec.contains("group") && !rec["group"].is_null()) {
    if (!rec["group"].is_string())
      throw Error(where + ": field 'group' must be a string");
    utt.group = rec["group"].get<std::string>();
  }
  if (rec.contains("duration_sec") && !rec["duration_sec"].is_null()) {
    if (!rec["duration_sec"].is_number())
      throw Error(where + ": field 'duration_sec' must be a number");
    double d = rec["duration_sec"].get<double>();
    if (!(d >= 0.0))
      throw Error(where + ": field 'duration_sec' must be >= 0");
    utt.duration_sec = d;
  }
  return utt;
}

}  // namespace

std::vector<Utterance> LoadManifest(const std::string& path) {
  std::string content = ReadFileOrThrow(path);
  std::vector<Utterance> out;
  std::unordered_set<std::string> seen;
  std::istringstream in(content);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string where = LineContext(path, line_no);
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded()) throw Error(where + ": invalid JSON record");
    Utterance utt = ParseManifestRecord(rec, where);
    if (!seen.insert(utt.id).second)
      throw Error(where + ": duplicate utterance id '" + utt.id + "'");
    out.push_back(std::move(utt));
  }
  return out;
}

void SaveManifest(const std::vector<Utterance>& data, const std::string& path) {
  std::string out;
  for (const Utterance& utt : data) {
    json rec;
    rec["id"] = utt.id;
    if (!utt.transcripts.empty()) {
      json tr = json::object();
      for (const auto& [name, text] : utt.transcripts) tr[name] = text;
      rec["transcripts"] = tr;
    }
    if (utt.label) rec["label"] = *utt.label;
    if (utt.group) rec["group"] = *utt.group;
    if (utt.duration_sec) rec["duration_sec"] = *utt.duration_sec;
    out += rec.dump();
    out += '\n';
  }
  AtomicWriteFile(path, out);
}

LabelSet LabelsFromData(const std::vector<Utterance>& data) {
  std::set<std::string> codes;
  for (const Utterance& utt : data)
    if (utt.label) codes.insert(*utt.label);
  if (codes.empty()) throw Error("no labeled utterances; cannot build a label set");
  return LabelSet(std::vector<std::string>(codes.begin(), codes.end()));
}

LabelSet LoadLabelSet(const std::string& path) {
  std::istringstream in(ReadFileOrThrow(path));
  std::vector<std::string> codes;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) codes.push_back(line);
  }
  if (codes.empty()) throw Error(path + ": empty label set file");
  return LabelSet(std::move(codes));
}

void SaveLabelSet(const LabelSet& labels, const std::string& path) {
  std::string out;
  for (const auto& c : labels.codes()) {
    out += c;
    out += '\n';
  }
  AtomicWriteFile(path, out);
}

const ScoreVector& ScoreTable::Row(const std::string& utterance_id) const {
  for (const ScoreVector& row : rows)
    if (row.utterance_id == utterance_id) return row;
  throw Error("no score row for utterance '" + utterance_id + "'");
}

bool ScoreTable::Has(const std::string& utterance_id) const {
  return std::any_of(rows.begin(), rows.end(), [&](const ScoreVector& row) {
    return row.utterance_id == utterance_id;
  });
}

ScoreTable LoadScores(const std::string& path) {
  std::istringstream in(ReadFileOrThrow(path));
  std::string line;
  size_t line_no = 0;

  if (!std::getline(in, line))
    throw Error(path + ": empty score file, missing '#space' line");
  ++line_no;
  if (line.rfind("#space ", 0) != 0)
    throw Error(LineContext(path, line_no) + ": expected '#space <...>' header");
  ScoreTable table;
  table.space = ScoreSpaceFromString(line.substr(7));

  if (!std::getline(in, line))
    throw Error(path + ": missing column header line");
  ++line_no;
  std::vector<std::string> header = SplitTabs(line);
  if (header.size() < 2 || header[0] != "id")
    throw Error(LineContext(path, line_no) +
                ": column header must be 'id<TAB>code1<TAB>...'");
  table.labels = LabelSet(std::vector<std::string>(header.begin() + 1, header.end()));

  const size_t k = static_cast<size_t>(table.labels.size());
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string where = LineContext(path, line_no);
    std::vector<std::string> fields = SplitTabs(line);
    if (fields.size() != k + 1)
      throw Error(where + ": expected " + std::to_string(k + 1) + " fields, got " +
                  std::to_string(fields.size()));
    ScoreVector row;
    row.utterance_id = fields[0];
    if (row.utterance_id.empty()) throw Error(where + ": empty utterance id");
    if (!seen.insert(row.utterance_id).second)
      throw Error(where + ": duplicate utterance id '" + row.utterance_id + "'");
    row.space = table.space;
    row.values.reserve(k);
    for (size_t i = 0; i < k; ++i) {
      double v = ParseDouble(fields[i + 1], where);
      if (!std::isfinite(v))
        throw Error(where + ": non-finite score for language '" +
                    table.labels.code(static_cast<int>(i)) + "'");
      row.values.push_back(v);
    }
    if (table.space == ScoreSpace::kLogPosterior) {
      double lse = LogSumExp(row.values);
      if (std::abs(lse) > 1e-6)
        throw Error(where + ": log_posterior row does not normalize (logsumexp = " +
                    FormatFloat(lse) + ")");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ScoreTable LoadScores(const std::string& path, const LabelSet& labels) {
  ScoreTable raw = LoadScores(path);
  if (!raw.labels.SameCodes(labels)) {
    // Identify one offending code for the error message.
    for (const auto& c : raw.labels.codes())
      if (!labels.Contains(c))
        throw Error(path + ": unknown language code in header: '" + c + "'");
    throw Error(path + ": header codes are not a permutation of the label set");
  }
  std::vector<int> source_col(static_cast<size_t>(labels.size()));
  for (int j = 0; j < labels.size(); ++j)
    source_col[static_cast<size_t>(j)] = raw.labels.Require(labels.code(j));
  ScoreTable out;
  out.space = raw.space;
  out.labels = labels;
  out.rows.reserve(raw.rows.size());
  for (const ScoreVector& row : raw.rows) {
    ScoreVector r;
    r.utterance_id = row.utterance_id;
    r.space = row.space;
    r.values.resize(static_cast<size_t>(labels.size()));
    for (int j = 0; j < labels.size(); ++j)
      r.values[static_cast<size_t>(j)] =
          row.values[static_cast<size_t>(source_col[static_cast<size_t>(j)])];
    out.rows.push_back(std::move(r));
  }
  return out;
}

void SaveScores(const ScoreTable& table, const std::string& path) {
  std::string out = "#space " + ToString(table.space) + "\n";
  out += "id";
  for (const auto& c : table.labels.codes()) {
    out += '\t';
    out += c;
  }
  out += '\n';
  for (const ScoreVector& row : table.rows) {
    if (row.values.size() != static_cast<size_t>(table.labels.size()))
      throw Error("score row for '" + row.utterance_id +
                  "' does not match the label set size");
    out += row.utterance_id;
    for (double v : row.values) {
      out += '\t';
      out += FormatFloat(v);
    }
    out += '\n';
  }
  AtomicWriteFile(path, out);
}

EmbeddingTable LoadEmbeddings(const std::string& path) {
  std::istringstream in(ReadFileOrThrow(path));
  std::string line;
  size_t line_no = 0;

  if (!std::getline(in, line))
    throw Error(path + ": empty embedding file, missing header");
  ++line_no;
  std::vector<std::string> header = SplitTabs(line);
  if (header.size() != 2 || header[0] != "id" || header[1].rfind("dim=", 0) != 0)
    throw Error(LineContext(path, line_no) + ": expected header 'id<TAB>dim=D'");
  EmbeddingTable table;
  table.dim = static_cast<int>(
      ParseInt(header[1].substr(4), LineContext(path, line_no)));
  if (table.dim < 1)
    throw Error(LineContext(path, line_no) + ": dimension must be >= 1");

  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string where = LineContext(path, line_no);
    std::vector<std::string> fields = SplitTabs(line);
    if (fields.size() != static_cast<size_t>(table.dim) + 1)
      throw Error(where + ": expected " + std::to_string(table.dim + 1) +
                  " fields, got " + std::to_string(fields.size()));
    EmbeddingVector row;
    row.utterance_id = fields[0];
    if (row.utterance_id.empty()) throw Error(where + ": empty utterance id");
    if (!seen.insert(row.utterance_id).second)
      throw Error(where + ": duplicate utterance id '" + row.utterance_id + "'");
    row.values.reserve(static_cast<size_t>(table.dim));
    for (int i = 0; i < table.dim; ++i) {
      double v = ParseDouble(fields[static_cast<size_t>(i) + 1], where);
      if (!std::isfinite(v)) throw Error(where + ": non-finite embedding value");
      row.values.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void SaveEmbeddings(const EmbeddingTable& table, const std::string& path) {
  std::string out = "id\tdim=" + std::to_string(table.dim) + "\n";
  for (const EmbeddingVector& row : table.rows) {
    if (row.values.size() != static_cast<size_t>(table.dim))
      throw Error("embedding row for '" + row.utterance_id +
                  "' does not match dim=" + std::to_string(table.dim));
    out += row.utterance_id;
    for (double v : row.values) {
      out += '\t';
      out += FormatFloat(v);
    }
    out += '\n';
  }
  AtomicWriteFile(path, out);
}

std::map<std::string, std::vector<Utterance>> SplitByGroup(
    const std::vector<Utterance>& data) {
  std::map<std::string, std::vector<Utterance>> out;
  for (const Utterance& utt : data)
    out[utt.group ? *utt.group : std::string(kUngrouped)].push_back(utt);
  return out;
}

}  // namespace lidkit
