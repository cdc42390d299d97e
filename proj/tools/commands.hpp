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

// Command-line front end. Kept apart from main() so tests can drive it with
// in-memory streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace portmatch::cli {

/// Exit codes.
enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,     // unreadable input, bad circuit, pattern rejected by compile
  kFormat = 3,    // matcher file damaged or from another version
  kInternal = 4,  // invariant violation or a baseline disagreement
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace portmatch::cli
