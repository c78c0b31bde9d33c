// Copyright 2026 The defect-forge authors
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

#include <string>

namespace dforge {

enum class LogLevel { Debug = 0, Info, Warn, Error, Off };

/// Level from DEFECT_FORGE_LOG (debug|info|warn|error|off), default Warn.
[[nodiscard]] LogLevel log_level();

/// Writes to stderr when `level` clears the configured threshold. Run
/// artifacts never go through here, so logging cannot perturb determinism.
void log(LogLevel level, const std::string& message);

}  // namespace dforge
