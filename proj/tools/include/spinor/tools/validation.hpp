// Copyright 2026 The spinorcqed Authors
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

// Built-in acceptance suite. Each check runs a desk-scale simulation and
// compares against pinned tolerances; results carry the measured numbers so a
// failure can be diagnosed from the report alone.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace spinor::validation {

struct Options {
  std::uint64_t seed = 20260417;
  unsigned threads = 0;              // 0: hardware concurrency
  double fault_rate_scale = 1.0;     // multiplies every trajectory jump rate (fault injection)
  std::vector<int> only;             // check ids to run; empty runs all
  std::string artifact_dir;          // Q-function images for check 10; empty writes none
  std::function<void(const std::string&)> progress;  // optional log sink
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::vector<std::string> details;  // measured values against tolerances
  double seconds = 0.0;
};

struct Report {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

struct CheckInfo {
  int id;
  const char* name;
  const char* summary;
};

/// The ten checks, in id order.
const std::vector<CheckInfo>& catalogue();

/// Runs the selected checks in id order. `on_result` is called as each
/// check finishes.
Report run(const Options& options, const std::function<void(const CheckResult&)>& on_result = {});

/// "PASS  3 scaling-law  ... (1.2 s)" style single line.
std::string summary_line(const CheckResult& r);

}  // namespace spinor::validation
