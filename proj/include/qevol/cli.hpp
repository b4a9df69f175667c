// Copyright 2026 The qevol Authors
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
#include <optional>
#include <string>
#include <vector>

#include "qevol/io.hpp"
#include "qevol/random.hpp"

namespace qevol::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_invariant_failure = 3;

/// One experiment. Defaults are listed in the README; every field that drives
/// sampling (shots, trials, steps) requires `seed`.
struct ExperimentConfig {
  std::string command;
  std::optional<Seed> seed;
  bool json = false;
  // Overrides the tolerance of the deterministic checks.
  std::optional<double> tol;
  std::optional<std::string> out;
  bool timing = false;

  std::optional<std::string> unitary;
  std::string basis;  // pauli | weyl; empty picks by dimension
  std::optional<std::string> u0;
  std::string state = "zero";
  std::optional<long> dim;
  std::vector<long> dims;
  std::uint64_t shots = 0;

  std::string map = "dephasing:0.5";
  std::size_t op_index = 0;
  std::uint64_t trials = 0;
  int n = 8;
  double delta = 0.1;
  std::optional<double> epsilon;

  double alpha = 0.7071067811865476;
  std::string mode = "comb";

  std::string ancilla_basis = "computational";
  std::uint64_t steps = 100;
  std::optional<std::uint64_t> corrupt_step;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0;
  double tolerance = 0;
};

struct Report {
  io::Json json;
  std::vector<Check> checks;
  // Human-readable table.
  std::string text;
  int exit_code = exit_ok;
};

/// Dispatches to the owning module. Never throws for bad input: the report
/// carries an "error" entry with a diagnostic specific to the failure kind
/// and exit code 2. A failed invariant check gives exit code 3.
Report run(const ExperimentConfig& config);

const std::vector<std::string>& subcommands();

}  // namespace qevol::cli
