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

/**
 * @file scenario.hpp
 * @brief JSON scenario files.
 *
 * Durations are strings ("250ns", "3cycles@500MHz") or integers, read as base
 * ticks. Unknown keys are rejected. Relative program paths resolve against
 * the scenario file's directory.
 */

#pragma once

#include "qcsim/control/job_server.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qcsim::scenario {

inline constexpr int kSchemaVersion = 1;

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A scenario value failed validation; path() names the field, e.g. "boards[2].id".
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what) : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  control::TestbedConfig testbed;
  std::optional<std::filesystem::path> program_path;
  std::vector<control::BoardBinary> binaries;
  control::JobOptions job;
  std::optional<SimTime> t_stop;
  std::filesystem::path source;

  bool has_program() const { return program_path.has_value(); }
};

/// Throws ParseError (unreadable file, bad JSON, bad program text) and
/// ValidationError.
Scenario load_scenario(const std::filesystem::path& path);

/// Same, from an already-parsed document.
Scenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir);

/// Re-applies a seed to the scenario and everything derived from it.
void set_seed(Scenario& s, std::uint64_t seed);

}  // namespace qcsim::scenario
