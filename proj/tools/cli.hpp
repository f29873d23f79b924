/*
 * Copyright 2026 The mpembed Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef MPEMBED_TOOLS_CLI_HPP
#define MPEMBED_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mpembed::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs `mpembed <subcommand> ...`; args excludes the program name.
/// Subcommands: train, search, eval, counts, synth.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpembed::cli

#endif  // MPEMBED_TOOLS_CLI_HPP
