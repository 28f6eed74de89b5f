// Copyright 2026 The relent Authors
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

#include <iosfwd>
#include <string>
#include <vector>

namespace relent::cli {

/// Exit codes: 0 all checks pass, 1 usage/config/precondition error,
/// 2 inequality or identity violation beyond tolerance.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "RELENT_OUT_DIR";

/// Entry point shared by the executable and the tests. Table output goes to
/// `out` unless --out or RELENT_OUT_DIR redirect it; diagnostics and failure
/// reports go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// %.17g, with inf/-inf/nan spelled out.
std::string format_double(double v);

}  // namespace relent::cli
