/* Copyright 2026 The SCS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scs::data {

// Closed word list; id 0 is reserved for unknown words.
class Vocabulary {
 public:
  static constexpr int kUnk = 0;

  explicit Vocabulary(std::vector<std::string> words);

  // Covers every word the synthetic templates emit.
  static const Vocabulary& builtin();

  int id(std::string_view word) const;
  const std::string& word(int id) const;
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

// Lower-cases, strips ASCII punctuation and splits on whitespace.
std::vector<std::string> split_words(std::string_view text);

// Unknown words map to Vocabulary::kUnk; never throws.
std::vector<int> tokenize(std::string_view expression, const Vocabulary& vocab);

}  // namespace scs::data
