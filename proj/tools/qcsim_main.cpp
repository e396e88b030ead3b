/*
 * Copyright 2026 The qcsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qcsim/scenario/runner.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <atomic>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace {

using qcsim::scenario::Scenario;

Scenario load_or_report(const std::string& path, std::ostream& err, bool& ok) {
  try {
    ok = true;
    return qcsim::scenario::load_scenario(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    ok = false;
    return {};
  }
}

int cmd_run(const std::vector<std::string>& paths, const std::string& out, std::optional<std::uint64_t> seed,
            const std::string& until, unsigned jobs) {
  std::vector<Scenario> scenarios;
  for (const std::string& p : paths) {
    bool ok = false;
    Scenario s = load_or_report(p, std::cerr, ok);
    if (!ok) return 1;
    if (seed) qcsim::scenario::set_seed(s, *seed);
    if (!until.empty()) {
      try {
        s.t_stop = qcsim::parse_time(until);
        s.job.t_stop = s.t_stop;
      } catch (const std::exception& e) {
        std::cerr << "error: --until: " << e.what() << '\n';
        return 1;
      }
    }
    scenarios.push_back(std::move(s));
  }

  const bool many = scenarios.size() > 1;
  std::atomic<std::size_t> next{0};
  std::atomic<int> status{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      const Scenario& s = scenarios[i];
      const std::filesystem::path dir = many ? std::filesystem::path(out) / s.name : std::filesystem::path(out);
      std::ostringstream diag;
      const int rc = qcsim::scenario::run(s, dir, diag);
      std::lock_guard<std::mutex> lock(io);
      if (rc != 0) {
        std::cerr << diag.str();
        status = 1;
      } else {
        std::cout << fmt::format("{}: wrote {}\n", s.name, dir.string());
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(scenarios.size())));
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return status;
}

template <typename F>
int with_scenario(const std::string& path, F&& f) {
  bool ok = false;
  const Scenario s = load_or_report(path, std::cerr, ok);
  if (!ok) return 1;
  try {
    std::cout << f(s);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcsim: multi-FPGA quantum control cluster simulator"};
  app.require_subcommand(1);

  std::vector<std::string> run_paths;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::string until;
  unsigned jobs = 1;
  CLI::App* run = app.add_subcommand("run", "Run scenarios; write trace.jsonl, pulses.csv and report.txt");
  run->add_option("scenario", run_paths, "Scenario file(s)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (one subdirectory per scenario when several are given)");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--until", until, "Override t_stop, e.g. 5ms");
  run->add_option("--jobs", jobs, "Scenarios to run concurrently")->check(CLI::PositiveNumber);

  std::string sync_path;
  CLI::App* sync = app.add_subcommand("sync-check", "Ring synchronization only; print corrections and residuals");
  sync->add_option("scenario", sync_path, "Scenario file")->required()->check(CLI::ExistingFile);

  std::string tp_path;
  CLI::App* tp = app.add_subcommand("throughput", "Print the link efficiency table");
  tp->add_option("scenario", tp_path, "Scenario file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(run_paths, out, seed, until, jobs);
  if (*sync) return with_scenario(sync_path, qcsim::scenario::sync_check);
  if (*tp) return with_scenario(tp_path, qcsim::scenario::throughput_table);
  return 1;
}
