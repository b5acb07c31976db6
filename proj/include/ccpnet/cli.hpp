/*
   Copyright 2026 The ccpnet Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ccpnet/market.hpp"

namespace ccpnet::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kRuntimeError = 3 };

/// Entry point of the `ccpnet` tool. Results go to `out`, progress and
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Resolves a `--ce` argument: a built-in table name, `equal:K`, or a comma
/// separated list of exposures. The cleared class defaults to the table's
/// credit class, else the last class.
HomogeneousSpec homogeneous_from_ce(const std::string& ce);

} // namespace ccpnet::cli
