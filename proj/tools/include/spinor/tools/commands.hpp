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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinor/tools/config.hpp"

namespace spinor::cli {

enum ExitCode : int { kSuccess = 0, kConfigFailure = 1, kNumericalFailure = 2, kValidationFailure = 3 };

struct Context {
  unsigned threads = 0;  // 0: hardware concurrency
  std::ostream* out = nullptr;  // human-readable progress and summaries
};

/// Applies --seed / --out / --format overrides to a parsed config.
void apply_overrides(RunConfig& cfg, std::optional<std::uint64_t> seed, std::optional<std::string> out_dir,
                     const std::vector<std::string>& formats);

/// Thread count from the flag, else SPINOR_THREADS, else 0.
unsigned resolve_thread_count(std::optional<unsigned> flag);

int cmd_params(const RunConfig& cfg, const Context& ctx);
int cmd_simulate(const RunConfig& cfg, const Context& ctx);
int cmd_sweep(const RunConfig& cfg, const Context& ctx);
int cmd_qfunction(const RunConfig& cfg, const Context& ctx);

struct ValidateRequest {
  std::vector<int> only;
  double fault_rate_scale = 1.0;
  std::optional<std::uint64_t> seed;
  std::string output_dir = "spinorsim-out";
};
int cmd_validate(const ValidateRequest& req, const Context& ctx);

}  // namespace spinor::cli
