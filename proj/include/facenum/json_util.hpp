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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "facenum/errors.hpp"

namespace facenum {

using json = nlohmann::json;
// Preserves insertion order so serialized reports are byte-stable.
using ojson = nlohmann::ordered_json;

/// Parses a JSON document from disk. SchemaError on missing file or malformed
/// JSON, with the path in the message.
json load_json_file(const std::filesystem::path& path);

/// Writes a document with a trailing newline, creating parent directories.
void write_json_file(const std::filesystem::path& path, const ojson& doc);

/// Fetches `doc[field]`, throwing SchemaError naming the field when absent.
const json& require_field(const json& doc, const std::string& field,
                          const std::string& context);

/// Reads/writes a whole file as bytes.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

}  // namespace facenum
