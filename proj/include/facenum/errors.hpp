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

#include <stdexcept>
#include <string>

namespace facenum {

/// Error taxonomy shared by every module. The CLI maps kinds onto its
/// exit-code contract (usage/config -> 2, transport/runtime -> 3).
enum class ErrorKind {
    Validation,  // input violates a documented invariant
    Schema,      // a document does not match its schema
    Parse,       // free text could not be interpreted
    Config,      // bad or missing configuration
    Transport,   // network failure after bounded retries
    Protocol,    // remote peer replied with a non-conforming payload
    Format,      // undecodable raster or file format
    Generation,  // synthetic scenario could not be realized
    Usage,       // command line misuse
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error(ErrorKind::Validation, m) {}
};
struct SchemaError : Error {
    explicit SchemaError(const std::string& m) : Error(ErrorKind::Schema, m) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorKind::Config, m) {}
};
struct ProtocolError : Error {
    explicit ProtocolError(const std::string& m) : Error(ErrorKind::Protocol, m) {}
};
struct FormatError : Error {
    explicit FormatError(const std::string& m) : Error(ErrorKind::Format, m) {}
};
struct GenerationError : Error {
    explicit GenerationError(const std::string& m) : Error(ErrorKind::Generation, m) {}
};
struct UsageError : Error {
    explicit UsageError(const std::string& m) : Error(ErrorKind::Usage, m) {}
};

/// Raised after bounded retries have been exhausted; carries the attempt count.
struct TransportError : Error {
    TransportError(const std::string& m, int attempts_made)
        : Error(ErrorKind::Transport, m + " (after " + std::to_string(attempts_made) + " attempts)"),
          attempts(attempts_made) {}
    int attempts;
};

/// Raised when a model reply cannot be interpreted; keeps the raw reply.
struct ParseError : Error {
    explicit ParseError(const std::string& m, std::string raw = {})
        : Error(ErrorKind::Parse, m), raw_text(std::move(raw)) {}
    std::string raw_text;
};

}  // namespace facenum
