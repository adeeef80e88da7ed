// Copyright 2026 The littlebig Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <iosfwd>

namespace littlebig::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kInputError = 2,
  kInvariantViolation = 3,
};

/// Parses argv and runs one subcommand. Never throws.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace littlebig::cli
