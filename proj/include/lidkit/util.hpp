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

#ifndef LIDKIT_UTIL_HPP
#define LIDKIT_UTIL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lidkit {

// ---------------------------------------------------------------------------
// Numeric formatting / parsing

/// Shortest decimal form of `v` that parses back to the identical double.
std::string FormatFloat(double v);

/// strtod with full-string validation; `context` names the file/field in the
/// error message.
double ParseDouble(std::string_view token, const std::string& context);
int64_t ParseInt(std::string_view token, const std::string& context);

/// log(sum_i exp(x_i)), stable. Empty input returns -inf.
double LogSumExp(std::span<const double> x);

// ---------------------------------------------------------------------------
// Strings

std::vector<std::string> SplitTabs(std::string_view line);
std::vector<std::string> SplitWhitespace(std::string_view text);
std::vector<std::string> SplitChar(std::string_view text, char sep);

// ---------------------------------------------------------------------------
// UTF-8

/// Decodes UTF-8 into code points. Invalid byte sequences become U+FFFD, one
/// replacement per rejected byte.
std::vector<uint32_t> DecodeUtf8(std::string_view text);
void AppendUtf8(uint32_t cp, std::string* out);
std::string EncodeUtf8(std::span<const uint32_t> cps);

/// Lowercases ASCII A-Z and the Latin-1 uppercase range (except the
/// multiplication sign). Everything else passes through.
uint32_t ToLowerCp(uint32_t cp);

// ---------------------------------------------------------------------------
// Hashing / seeding

/// FNV-1a, stable across platforms. Used to derive per-utterance RNG streams.
uint64_t Fnv1a64(std::string_view data);
uint64_t Fnv1a64(uint64_t seed, std::string_view data);

/// Mixes a base seed with a stream tag and an item key into one RNG seed.
uint64_t DeriveSeed(uint64_t base, std::string_view stream, std::string_view key);

// ---------------------------------------------------------------------------
// Files

std::string ReadFileOrThrow(const std::string& path);

/// Writes via a temp file in the same directory, then renames over `path`.
void AtomicWriteFile(const std::string& path, std::string_view content);

}  // namespace lidkit

#endif  // LIDKIT_UTIL_HPP
