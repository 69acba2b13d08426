// Copyright 2026 The foc Authors. All Rights Reserved.
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

#ifndef FOC_TOOLS_CLI_H_
#define FOC_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace foc::cli {

// Runs one command line (without the program name). Returns 0 on success,
// 1 on a runtime error reported as "error: <kind>: <message>", and 2 on a
// usage error. Progress and summaries go to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace foc::cli

#endif  // FOC_TOOLS_CLI_H_
