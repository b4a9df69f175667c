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

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "qevol/cli.hpp"

int main(int argc, char** argv) {
  using qevol::cli::ExperimentConfig;
  ExperimentConfig config;
  CLI::App app{"qevol: which-evolution measurements, CP-map storage and "
               "interaction entanglement"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  double tol = 0;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for every sampled quantity");
  auto* tol_opt = app.add_option("--tol", tol, "Tolerance for deterministic checks");
  auto* out_opt = app.add_option("--out", out, "Also write the JSON report here");
  app.add_flag("--json", config.json, "Print the JSON report instead of a table");
  app.add_flag("--timing", config.timing, "Add wall time to the report");

  std::string unitary, u0;
  long dim = 0;
  std::uint64_t corrupt = 0;
  double epsilon = 0;

  const std::map<std::string, std::string> about = {
      {"basis", "Build an operator basis and expand a gate in it"},
      {"measure", "Which-evolution measurement of a gate"},
      {"channel", "Choi state, canonical Kraus form and map entropy"},
      {"compress", "Typical-subspace compression of a stored evolution"},
      {"retrieve", "Probabilistic retrieval of one stored operator"},
      {"schmidt", "Operator Schmidt decomposition of a two-party gate"},
      {"concentrate", "Entanglement concentration from alpha II + beta XX"},
      {"superdense", "Superdense coding through an evolution"},
      {"verify", "Check a record of claimed Kraus indices"}};
  for (const auto& name : qevol::cli::subcommands()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->fallthrough();
    sub->add_option("--unitary", unitary, "Gate name or matrix file");
    sub->add_option("--u0", u0, "Basis prefactor u0 (gate or file)");
    sub->add_option("--dim", dim, "Dimension");
    sub->add_option("--basis", config.basis, "pauli or weyl");
    sub->add_option("--state", config.state, "zero, plus, bell, random:<seed> or file");
    sub->add_option("--dims", config.dims, "dA,dB")->delimiter(',');
    sub->add_option("--shots", config.shots, "Number of shots");
    sub->add_option("--map", config.map, "Channel name or Kraus file");
    sub->add_option("--op-index", config.op_index, "Stored Kraus operator index");
    sub->add_option("--trials", config.trials, "Retrieval trials");
    sub->add_option("--n", config.n, "Block length / number of copies");
    sub->add_option("--delta", config.delta, "Typicality window");
    sub->add_option("--epsilon", epsilon, "Tail mass for fixed-mass compression");
    sub->add_option("--alpha", config.alpha, "|alpha| of alpha II + beta XX");
    sub->add_option("--mode", config.mode, "exact or comb");
    sub->add_option("--ancilla-basis", config.ancilla_basis, "computational or fourier");
    sub->add_option("--steps", config.steps, "Verification steps");
    sub->add_option("--corrupt-step", corrupt, "Flip the claimed index at this step");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qevol::cli::exit_input_error;
  }

  auto* chosen = app.get_subcommands().front();
  config.command = chosen->get_name();
  if (seed_opt->count() > 0) config.seed = seed;
  if (tol_opt->count() > 0) config.tol = tol;
  if (out_opt->count() > 0) config.out = out;
  // Options are bound to shared variables; presence is read per subcommand.
  if (chosen->get_option("--unitary")->count() > 0) config.unitary = unitary;
  if (chosen->get_option("--u0")->count() > 0) config.u0 = u0;
  if (chosen->get_option("--dim")->count() > 0) config.dim = dim;
  if (chosen->get_option("--epsilon")->count() > 0) config.epsilon = epsilon;
  if (chosen->get_option("--corrupt-step")->count() > 0) config.corrupt_step = corrupt;

  const auto report = qevol::cli::run(config);
  if (config.json) {
    std::cout << report.json.dump(2) << "\n";
  } else {
    (report.exit_code == qevol::cli::exit_input_error ? std::cerr : std::cout)
        << report.text;
  }
  if (config.out) {
    std::ofstream file(*config.out);
    if (!file) {
      std::cerr << "error (output): cannot write '" << *config.out << "'\n";
      return qevol::cli::exit_input_error;
    }
    file << report.json.dump(2) << "\n";
  }
  return report.exit_code;
}
