// Copyright 2026 The qwalk Authors
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

#include "qwalk/engine.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qwalk::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitValidation = 2 };

/// One parsed command line: config file values overlaid by flags.
struct JobSpec {
    std::string command;
    RunConfig config;
    std::string out;
    std::string format = "csv";
    std::string grid;
    std::string input;
};

/// Parse `args` (without the program name) and run the command. Diagnostics
/// go to `err`, reports and stdout output to `out`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

int run_cli(int argc, char **argv);

} // namespace qwalk::cli
