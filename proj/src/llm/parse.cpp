// Copyright 2026 The facenum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "facenum/llm/parse.hpp"

#include <array>
#include <cctype>
#include <string_view>

namespace facenum {

namespace {

bool is_word_char(unsigned char c) { return std::isalpha(c) != 0; }
bool is_digit(unsigned char c) { return std::isdigit(c) != 0; }

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

constexpr std::array<std::string_view, 11> kNumberWords = {
    "zero", "one", "two", "three", "four", "five",
    "six",  "seven", "eight", "nine", "ten"};

}  // namespace

Verdict parse_verdict(const std::string& raw) {
    std::size_t i = 0;
    while (i < raw.size()) {
        if (!is_word_char(raw[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < raw.size() && is_word_char(raw[j])) ++j;
        const std::string word = lower(std::string_view(raw).substr(i, j - i));
        if (word == "yes") return Verdict::Yes;
        if (word == "no") return Verdict::No;
        i = j;
    }
    throw ParseError("no yes/no verdict found in reply", raw);
}

long long parse_count(const std::string& raw) {
    std::size_t i = 0;
    while (i < raw.size()) {
        const unsigned char c = raw[i];
        if (is_word_char(c)) {
            std::size_t j = i;
            while (j < raw.size() && is_word_char(raw[j])) ++j;
            const std::string word = lower(std::string_view(raw).substr(i, j - i));
            for (std::size_t n = 0; n < kNumberWords.size(); ++n) {
                if (word == kNumberWords[n]) return static_cast<long long>(n);
            }
            i = j;
        } else if (is_digit(c)) {
            std::size_t j = i;
            while (j < raw.size() && is_digit(raw[j])) ++j;
            // A '-' directly attached to the literal (and not a hyphen inside a
            // compound like "room-2") makes it negative: skip it.
            bool negative = false;
            if (i > 0 && raw[i - 1] == '-') {
                negative = i < 2 || !std::isalnum(static_cast<unsigned char>(raw[i - 2]));
            }
            if (!negative && j - i <= 9) {
                return std::stoll(raw.substr(i, j - i));
            }
            i = j;
        } else {
            ++i;
        }
    }
    throw ParseError("no non-negative integer found in reply", raw);
}

std::string extract_reason(const std::string& raw) {
    const std::string low = lower(raw);
    const auto pos = low.find("reason");
    if (pos == std::string::npos) return "";
    std::size_t start = pos + 6;
    while (start < raw.size() &&
           (raw[start] == ':' || raw[start] == ' ' || raw[start] == '-')) {
        ++start;
    }
    std::string reason = raw.substr(start);
    while (!reason.empty() && (reason.back() == '\n' || reason.back() == ' ')) {
        reason.pop_back();
    }
    return reason;
}

}  // namespace facenum
