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


#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinor/error.hpp"
#include "spinor/tools/commands.hpp"
#include "spinor/tools/config.hpp"
#include "spinor/tools/output.hpp"

namespace cli = spinor::cli;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::vector<std::string> formats;
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
  auto* opt = sub->add_option("-c,--config", c.config, "run configuration (JSON)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "override the configured seed");
  sub->add_option("--threads", c.threads, "worker threads (0: all cores; default SPINOR_THREADS)");
  sub->add_option("-o,--out", c.out, "output directory");
  sub->add_option("--format", c.formats, "comma-separated subset of table,record,image")->delimiter(',');
}

int report_config_error(const cli::ConfigError& e) {
  std::cerr << e.to_json().dump(2) << "\n";
  return cli::kConfigFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinorsim: spin-1 cavity-QED squeezing simulator"};
  app.set_version_flag("--version", "spinorsim " + cli::version());
  app.require_subcommand(1);

  Common c;
  auto* params = app.add_subcommand("params", "map microscopic parameters to effective couplings");
  auto* simulate = app.add_subcommand("simulate", "evolve a configured model and report squeezing");
  auto* sweep = app.add_subcommand("sweep", "sweep atoms, damping or squeezing angle");
  auto* qfun = app.add_subcommand("qfunction", "compute spin-1 Husimi Q-function snapshots");
  auto* validate = app.add_subcommand("validate", "run the built-in validation checks");
  for (auto* s : {params, simulate, sweep, qfun}) add_common(s, c, true);

  cli::ValidateRequest vreq;
  std::optional<std::uint64_t> vseed;
  std::optional<unsigned> vthreads;
  std::optional<std::string> vout;
  validate->add_option("--only", vreq.only, "check ids to run (repeatable)")->check(CLI::Range(1, 10));
  validate->add_option("--fault-rate-scale", vreq.fault_rate_scale,
                       "multiply the dissipative rates of the stochastic run (fault injection)")
      ->check(CLI::PositiveNumber);
  validate->add_option("--seed", vseed, "base seed");
  validate->add_option("--threads", vthreads, "worker threads (0: all cores)");
  validate->add_option("-o,--out", vout, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfigFailure;
  }

  try {
    if (*validate) {
      cli::Context ctx{cli::resolve_thread_count(vthreads), &std::cout};
      vreq.seed = vseed;
      if (vout) vreq.output_dir = *vout;
      return cli::cmd_validate(vreq, ctx);
    }
    cli::RunConfig cfg = cli::load_config(c.config);
    cli::apply_overrides(cfg, c.seed, c.out, c.formats);
    cli::Context ctx{cli::resolve_thread_count(c.threads), &std::cout};
    if (*params) return cli::cmd_params(cfg, ctx);
    if (*simulate) return cli::cmd_simulate(cfg, ctx);
    if (*sweep) return cli::cmd_sweep(cfg, ctx);
    return cli::cmd_qfunction(cfg, ctx);
  } catch (const cli::ConfigError& e) {
    return report_config_error(e);
  } catch (const spinor::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kConfigFailure;
  } catch (const spinor::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\nhint: use evolution.method \"trajectories\" or fewer atoms\n";
    return cli::kNumericalFailure;
  } catch (const spinor::IntegrationError& e) {
    std::cerr << "error: integration failed: " << e.what() << " (last good time " << e.last_good_time() << " s)\n";
    return cli::kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kNumericalFailure;
  }
}
