// Copyright 2026 The portmatch Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace portmatch {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph construction or a graph that violates an operation's
/// structural precondition (non-flat, disconnected, bad anchor set...).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// A vertex map that cannot be checked at all (wrong size, dangling handle).
/// An embedding that is merely invalid yields `false`, not this.
class EmbeddingError : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check failed. Signals a bug, not bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Pattern compilation failure, tagged with the offending pattern's index.
class CompileError : public Error {
 public:
  CompileError(std::size_t index, const std::string& what)
      : Error("pattern " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Circuit text that violates the JSON schema. `line` is 1-based, or 0 when
/// the input is a single document.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A circuit that cannot be converted (unknown gate, bad qubit index, port
/// graph that is not a circuit).
class CircuitError : public Error {
 public:
  using Error::Error;
};

/// Binary matcher file could not be decoded.
class FormatError : public Error {
 public:
  enum class Kind { kBadMagic, kUnsupportedVersion, kTruncated, kChecksum, kMalformed };

  FormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace portmatch
