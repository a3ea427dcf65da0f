// Copyright 2026 The appa-ed Authors
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

#ifndef APPA_PROBLEM_IO_HPP
#define APPA_PROBLEM_IO_HPP

// Problem files are JSON documents:
//
//   {
//     "demand_mw": 800,
//     "units": [
//       {"quad": 0.004, "lin": 5.3, "fixed": 500, "p_min": 350, "p_max": 450},
//       ...
//     ]
//   }

#include <filesystem>
#include <string>
#include <string_view>

#include "appa/dispatch.hpp"

namespace appa::dispatch {

/// Throws ParseError (with line/column or field path) on malformed input.
/// DispatchProblem validation errors (e.g. InfeasibleDemand) propagate as is.
DispatchProblem parse_problem(std::string_view text, std::string_view source = "<input>");
DispatchProblem load_problem(const std::filesystem::path& path);

/// Serializes with round-trip precision; parse_problem(write_problem(p)) == p.
std::string write_problem(const DispatchProblem& problem);
void save_problem(const DispatchProblem& problem, const std::filesystem::path& path);

}  // namespace appa::dispatch

#endif  // APPA_PROBLEM_IO_HPP
