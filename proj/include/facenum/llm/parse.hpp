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

#pragma once

#include <string>

#include "facenum/types.hpp"

namespace facenum {

/// First standalone "yes"/"no" token wins, case-insensitively. Substrings of
/// other words never match ("north" is not a "no"). ParseError when neither
/// token occurs.
Verdict parse_verdict(const std::string& raw);

/// First non-negative integer in the text, with the number words zero..ten
/// mapped to digits first. Negative literals are skipped. ParseError when no
/// usable integer occurs ("none" is deliberately unmapped).
long long parse_count(const std::string& raw);

/// Free-text justification following a "reason" marker, if any.
std::string extract_reason(const std::string& raw);

}  // namespace facenum
