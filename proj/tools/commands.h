// Copyright 2026 The relwmd Authors.
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

#ifndef RELWMD_TOOLS_COMMANDS_H_
#define RELWMD_TOOLS_COMMANDS_H_

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace relwmd::cli {

// Bad flag combination or value. The message starts with the flag name.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one `relwmd` invocation. `args` excludes the program name.
// Subcommands: build-cache, dist, knn, triplets, figure-data.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relwmd::cli

#endif  // RELWMD_TOOLS_COMMANDS_H_
