// Copyright 2026 The qsurrogate Authors
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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace qsurrogate {

enum class ExitCode : int {
    Success = 0,
    Config = 2,
    Dimension = 3,
    SfRefusal = 4,
    Io = 5,
};

struct CommandOptions {
    std::string config_path;
    std::optional<std::string> out;
    bool force = false;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;
};

/// Runs analyze, simulate, sample or qrf. Results go to options.out or
/// `out`; diagnostics and warnings go to `err`.
[[nodiscard]] ExitCode run_command(std::string_view command, const CommandOptions &options, std::ostream &out,
                                   std::ostream &err);

} // namespace qsurrogate
