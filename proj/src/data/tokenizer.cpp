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
#include "scs/data/tokenizer.hpp"

#include <cctype>

#include "scs/errors.hpp"

namespace scs::data {

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.empty() || words_[0] != "<unk>") words_.insert(words_.begin(), "<unk>");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<int>(i)).second) {
      throw ValidationError("duplicate vocabulary word '" + words_[i] + "'");
    }
  }
}

const Vocabulary& Vocabulary::builtin() {
  static const Vocabulary vocab({
      "<unk>", "the", "a",
      // colors
      "red", "green", "blue", "yellow",
      // shapes
      "square", "circle", "triangle",
      // size classes
      "small", "medium", "large",
      // positions and relations
      "on", "at", "in", "of", "to", "next", "left", "right", "top", "bottom", "center",
  });
  return vocab;
}

int Vocabulary::id(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::word(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= words_.size()) return words_[kUnk];
  return words_[static_cast<std::size_t>(id)];
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else if (!std::ispunct(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<int> tokenize(std::string_view expression, const Vocabulary& vocab) {
  std::vector<int> ids;
  for (const auto& w : split_words(expression)) ids.push_back(vocab.id(w));
  return ids;
}

}  // namespace scs::data
