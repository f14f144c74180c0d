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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace facenum {

/// SHA-256 of the bytes, as 64 lowercase hex characters.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(const std::string& text);

/// FNV-1a 64-bit. Stable across platforms; used for seeded error injection.
std::uint64_t fnv1a64(const std::string& text, std::uint64_t seed = 0);

/// Maps a 64-bit hash onto [0,1).
double hash_to_unit(std::uint64_t h);

}  // namespace facenum
