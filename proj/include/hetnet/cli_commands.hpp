// Copyright 2026 The hetnet-ee Authors
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

/// \file cli_commands.hpp
/// The `hetnet` command line, as a library call so tests can drive it
/// without spawning processes.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hetnet::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kConfigError = 2,
  kNumericalError = 3,
  kAllInfeasible = 4,
};

/// Runs one command. `args` excludes the program name, e.g.
/// {"coverage", "--preset", "paper-2tier", "--los", "exponential:0.002"}.
/// CSV goes to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, used as the output digest in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace hetnet::cli
