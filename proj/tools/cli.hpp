// Copyright 2026 The cgstitch Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// cli.hpp -- the cgstitch command line, callable in-process.

#ifndef CGSTITCH_TOOLS_CLI_HPP
#define CGSTITCH_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace cgstitch::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kArtifactNotFound = 3,
  kInternal = 4,
};

// `args` excludes the program name. Machine-readable JSON goes to `out`,
// which stays empty when the command fails; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cgstitch::cli

#endif  // CGSTITCH_TOOLS_CLI_HPP
