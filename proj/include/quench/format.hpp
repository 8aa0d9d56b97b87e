// Copyright 2026 The quenchsim authors
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

namespace quench {

/// Shortest decimal string that round-trips to the same double. All file
/// output goes through this so results are bitwise stable across runs.
std::string format_double(double v);

/// Strict parse; throws std::invalid_argument on trailing junk.
double parse_double(const std::string& s);

long parse_long(const std::string& s);

}  // namespace quench
