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

#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "qsurrogate/commands.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Surrogate-field analysis of sequentially measured quantum observables"};
    app.require_subcommand(1);
    qsurrogate::CommandOptions opts;
    std::string out_path;
    std::uint64_t seed = 0;
    const std::pair<const char *, const char *> commands[] = {
        {"analyze", "Born tables, bi-probabilities and KC/CM/SF checks on every configured grid"},
        {"simulate", "Compare exact observer dynamics with the surrogate-field Monte-Carlo average"},
        {"sample", "Write sampled surrogate-field trajectories as CSV"},
        {"qrf", "Classify a GKLS generator and check NCGD, CM and SF"},
    };
    for (const auto &[name, help] : commands) {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("config", opts.config_path, "Scenario configuration file")->required();
        sub->add_option("--out", out_path, "Write the report or CSV here instead of standard output");
        sub->add_flag("--force", opts.force, "Simulate even when the SF condition fails");
        sub->add_option("--threads", opts.threads, "Maximum worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Override the configured sampling seed");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(qsurrogate::ExitCode::Config);
    }
    const auto *sub = app.get_subcommands().front();
    if (sub->count("--out")) opts.out = out_path;
    if (sub->count("--seed")) opts.seed = seed;
    return static_cast<int>(qsurrogate::run_command(sub->get_name(), opts, std::cout, std::cerr));
}
