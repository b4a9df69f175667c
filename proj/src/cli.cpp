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

#include "qevol/cli.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "qevol/qevol.hpp"

namespace qevol::cli {
namespace {

using io::Json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Accumulates the report body and the matching text table.
class Builder {
 public:
  explicit Builder(const ExperimentConfig& c) : config_(c) {}

  void exact(const std::string& key, Json value) {
    add_row("exact", key, value);
    exact_[key] = std::move(value);
  }
  void empirical(const std::string& key, Json value) {
    add_row("empirical", key, value);
    empirical_[key] = std::move(value);
  }
  // Deterministic check: passes when value <= tolerance (overridable by --tol).
  void check_at_most(const std::string& name, double value, double tolerance) {
    const double tol = config_.tol.value_or(tolerance);
    checks_.push_back({name, value <= tol, value, tol});
  }
  // Statistical check, not affected by --tol.
  void check_sigma(const std::string& name, double z, double limit) {
    checks_.push_back({name, z <= limit, z, limit});
  }
  void check_true(const std::string& name, bool ok) {
    checks_.push_back({name, ok, ok ? 1.0 : 0.0, 1.0});
  }

  Report finish(Json config_echo) const {
    Report r;
    r.checks = checks_;
    bool ok = true;
    Json checks = Json::array();
    for (const auto& c : checks_) {
      ok = ok && c.passed;
      checks.push_back(Json{{"name", c.name},
                            {"passed", c.passed},
                            {"value", c.value},
                            {"tolerance", c.tolerance}});
    }
    r.json = Json{{"command", config_.command},
                  {"config", std::move(config_echo)},
                  {"exact", exact_},
                  {"empirical", empirical_},
                  {"checks", checks},
                  {"status", ok ? "ok" : "invariant_failure"}};
    r.exit_code = ok ? exit_ok : exit_invariant_failure;

    std::ostringstream text;
    text << config_.command << "\n";
    for (const auto& line : rows_) text << line << "\n";
    text << "checks\n";
    for (const auto& c : checks_) {
      text << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << "  "
           << fmt(c.value) << " (limit " << fmt(c.tolerance) << ")\n";
    }
    r.text = text.str();
    return r;
  }

 private:
  void add_row(const std::string& section, const std::string& key,
               const Json& value) {
    std::string shown = value.is_number_float() ? fmt(value.get<double>())
                                                : value.dump();
    if (shown.size() > 100) shown = shown.substr(0, 97) + "...";
    rows_.push_back("  " + section + "." + key + "  " + shown);
  }

  const ExperimentConfig& config_;
  Json exact_ = Json::object();
  Json empirical_ = Json::object();
  std::vector<Check> checks_;
  std::vector<std::string> rows_;
};

Json config_echo(const ExperimentConfig& c) {
  Json j = Json::object();
  j["command"] = c.command;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["tol"] = c.tol ? Json(*c.tol) : Json(nullptr);
  if (c.unitary) j["unitary"] = *c.unitary;
  if (!c.basis.empty()) j["basis"] = c.basis;
  if (c.u0) j["u0"] = *c.u0;
  j["state"] = c.state;
  if (c.dim) j["dim"] = *c.dim;
  if (!c.dims.empty()) j["dims"] = c.dims;
  j["shots"] = c.shots;
  j["map"] = c.map;
  j["op_index"] = c.op_index;
  j["trials"] = c.trials;
  j["n"] = c.n;
  j["delta"] = c.delta;
  j["epsilon"] = c.epsilon ? Json(*c.epsilon) : Json(nullptr);
  j["alpha"] = c.alpha;
  j["mode"] = c.mode;
  j["ancilla_basis"] = c.ancilla_basis;
  j["steps"] = c.steps;
  j["corrupt_step"] = c.corrupt_step ? Json(*c.corrupt_step) : Json(nullptr);
  return j;
}

Seed require_seed(const ExperimentConfig& c, bool sampling) {
  if (sampling && !c.seed) {
    throw InvalidArgument("--seed is required when the experiment samples");
  }
  return c.seed.value_or(0);
}

// Largest binomial z-score of observed counts against exact probabilities.
// A zero-variance outcome that deviates at all scores infinity.
double max_z_score(const std::vector<double>& probs,
                   const std::vector<std::uint64_t>& counts,
                   std::uint64_t shots) {
  double worst = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], 0.0, 1.0);
    const double f = double(counts[i]) / double(shots);
    const double sd = std::sqrt(p * (1 - p) / double(shots));
    if (sd < 1e-15) {
      if (std::abs(f - p) > 1e-12) worst = std::numeric_limits<double>::infinity();
      continue;
    }
    worst = std::max(worst, std::abs(f - p) / sd);
  }
  return worst;
}

std::string auto_basis(const ExperimentConfig& c, Eigen::Index d) {
  if (!c.basis.empty()) return c.basis;
  return std::has_single_bit(std::uint64_t(d)) ? "pauli" : "weyl";
}

Json doubles(const std::vector<double>& v) { return Json(v); }

Json real_vector(const RealVectorX<double>& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json coefficients_json(const ExpansionCoefficients<double>& c) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < c.coeffs.size(); ++i) {
    j.push_back(io::complex_to_json(c.coeffs(i)));
  }
  return j;
}

Matrixd unitary_arg(const ExperimentConfig& c, const char* fallback) {
  return io::parse_unitary(c.unitary.value_or(fallback), c.dim);
}

std::optional<Matrixd> u0_arg(const ExperimentConfig& c) {
  if (!c.u0) return std::nullopt;
  return io::parse_unitary(*c.u0, c.dim);
}

// ---------------------------------------------------------------------------

void cmd_basis(const ExperimentConfig& c, Builder& b) {
  const auto u0 = u0_arg(c);
  const long d = c.dim.value_or(u0 ? long(u0->rows()) : 2);
  const auto basis = io::make_basis(auto_basis(c, d), d, u0);
  b.exact("dim", d);
  b.exact("labels", basis.labels());
  b.exact("elements_unitary", basis.is_unitary());
  const double gram = (basis.gram_matrix() -
                       Matrixd::Identity(Eigen::Index(basis.size()),
                                         Eigen::Index(basis.size())))
                          .cwiseAbs()
                          .maxCoeff();
  b.exact("gram_defect", gram);
  b.check_at_most("trace_orthogonality", gram, 1e-10);
  if (c.unitary) {
    const Matrixd u = io::parse_unitary(*c.unitary, d);
    const auto coeffs = expand(u, basis);
    const auto probs = coeffs.probabilities();
    b.exact("coefficients", coefficients_json(coeffs));
    b.exact("probabilities", doubles(probs));
    b.check_at_most("reconstruction",
                    (reconstruct(coeffs, basis) - u).norm(), 1e-9);
    if (is_unitary<double>(u)) {
      b.check_at_most("probabilities_sum_to_one",
                      std::abs(coeffs.squared_norm() - 1.0), 1e-10);
    }
  }
}

void cmd_measure(const ExperimentConfig& c, Builder& b) {
  const Seed seed = require_seed(c, c.shots > 0);
  const UnitaryOperatord u(unitary_arg(c, "I"));
  const long d = long(u.dim());
  if (c.dim && *c.dim != d) {
    throw DimensionMismatch("dimension conflict: --dim " + std::to_string(*c.dim) +
                            " but the unitary is " + std::to_string(d) + "-dimensional");
  }
  const auto basis = io::make_basis(auto_basis(c, d), d, u0_arg(c));
  const PureStated psi(io::parse_state(c.state, d));
  const auto run = basis.kind() == BasisKind::pauli
                       ? measure_which_unitary(u, basis, psi, c.shots, seed)
                       : measure_which_unitary_qudit(u, basis, psi, c.shots, seed);
  const auto coeff_probs = expand(u, basis).probabilities();
  const auto& probs = run.distribution.probabilities;
  double law = 0;
  double total = 0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    law = std::max(law, std::abs(probs[a] - coeff_probs[a]));
    total += probs[a];
  }
  // Collapsed state of outcome a should be (B_a (x) I) psi up to phase.
  double collapse = 0;
  const Eigen::Index r = psi.dim() / d;
  for (const auto& br : run.branches) {
    const Vectord expected = vec_rows<double>(
        Matrixd(basis[br.outcome] * unvec_rows<double>(psi.amplitudes(), d, r)));
    const double fid = std::norm(expected.normalized().dot(br.collapsed.amplitudes()));
    collapse = std::max(collapse, 1 - fid);
  }
  b.exact("labels", run.distribution.labels);
  b.exact("probabilities", doubles(probs));
  b.exact("coefficient_probabilities", doubles(coeff_probs));
  b.check_at_most("probability_law", law, 1e-10);
  b.check_at_most("normalization", std::abs(total - 1), 1e-10);
  b.check_at_most("collapse_to_basis_element", collapse, 1e-9);
  if (c.shots > 0) {
    b.empirical("counts", *run.distribution.counts);
    b.empirical("frequencies", doubles(run.distribution.frequencies()));
    b.check_sigma("empirical_within_5_sigma",
                  max_z_score(probs, *run.distribution.counts, c.shots), 5.0);
  }
}

void cmd_channel(const ExperimentConfig& c, Builder& b) {
  const auto map = io::parse_map(c.map, c.dim);
  const auto canon = canonical_kraus(map);
  const auto ch = choi(map);
  const double s = entropy(map);
  b.exact("dim", map.dim());
  b.exact("kraus_count", map.size());
  b.exact("canonical_probabilities", doubles(canon.probabilities));
  b.exact("entropy_bits", s);
  b.check_true("choi_state_valid", ch.is_valid());
  double ortho = 0;
  for (std::size_t i = 0; i < canon.operators.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      ortho = std::max(ortho, std::abs(trace_inner(canon.operators[i], canon.operators[j])));
    }
  }
  b.check_at_most("canonical_orthogonality", ortho, 1e-9);
  b.check_at_most("canonical_reconstruction", choi_distance(map, canon.to_map()), 1e-9);
  const auto dil = stinespring(map);
  const Matrixd basis = Matrixd::Identity(dil.ancilla_dim, dil.ancilla_dim);
  b.exact("dilation_ancilla_dim", dil.ancilla_dim);
  b.check_at_most("dilation_round_trip",
                  choi_distance(map, kraus_from_ancilla_basis(dil, basis)), 1e-9);
  const double bound = 2 * std::log2(double(map.dim()));
  b.check_true("entropy_bounds", s >= -1e-12 && s <= bound + 1e-12);
}

void cmd_compress(const ExperimentConfig& c, Builder& b) {
  const auto map = io::parse_map(c.map, c.dim);
  const auto typ = typical_compress(map, c.n, c.delta);
  b.exact("entropy_bits", typ.entropy);
  b.exact("n", typ.n);
  b.exact("delta", c.delta);
  b.exact("kept_dim", typ.kept_dim);
  b.exact("rate", typ.rate);
  b.exact("delta_prime", typ.delta_prime);
  b.exact("infidelity_bound", typ.infidelity_bound);
  const double support = double(canonical_kraus(map).support_size());
  b.check_true("kept_dim_within_string_count",
               double(typ.kept_dim) <= std::pow(support, c.n) + 0.5);
  b.check_true("tail_mass_in_unit_interval",
               typ.infidelity_bound >= 0 && typ.infidelity_bound <= 1);
  if (c.epsilon) {
    const auto tail = compress_at_tail_mass(map, c.n, *c.epsilon);
    b.exact("tail_mass_target", *c.epsilon);
    b.exact("tail_mass_kept_dim", tail.kept_dim);
    b.exact("tail_mass_rate", tail.rate);
    b.exact("tail_mass_discarded", tail.infidelity_bound);
    b.check_true("tail_mass_respected", tail.infidelity_bound <= *c.epsilon + 1e-12);
  }
}

void cmd_retrieve(const ExperimentConfig& c, Builder& b) {
  const Seed seed = require_seed(c, c.trials > 0);
  const auto map = io::parse_map(c.map, c.dim);
  if (c.op_index >= map.size()) {
    throw InvalidArgument("--op-index " + std::to_string(c.op_index) +
                          " is out of range for a map with " +
                          std::to_string(map.size()) + " operators");
  }
  const PureStated psi(io::parse_state(c.state, long(map.dim())));
  const RetrievalExperiment<double> exp(map[c.op_index], map, psi);
  b.exact("support_dim", exp.support_dim());
  b.exact("flag_dilation", exp.dilated());
  b.exact("contraction_scale", exp.contraction_scale());
  b.exact("success_probability", exp.success_probability());
  const Vectord m_psi = map[c.op_index] * psi.amplitudes();
  const double n2 = map[c.op_index].squaredNorm() / double(map.dim());
  const double formula = m_psi.squaredNorm() /
                         (n2 * double(exp.support_dim()) *
                          exp.contraction_scale() * exp.contraction_scale());
  b.exact("success_formula", formula);
  b.check_at_most("success_matches_formula",
                  std::abs(exp.success_probability() - formula), 1e-9);
  const auto heralded = exp.outcome(0);
  const double fid =
      std::norm(exp.target().amplitudes().dot(heralded.post_state.amplitudes()));
  b.check_at_most("heralded_output_fidelity", 1 - fid, 1e-9);
  if (c.trials > 0) {
    const auto stats = retrieve_trials(Matrixd(map[c.op_index]), map, psi, c.trials, seed);
    b.empirical("trials", stats.trials);
    b.empirical("successes", stats.successes);
    b.empirical("herald_rate", stats.rate());
    const double sd = stats.standard_error();
    const double z = sd > 0 ? std::abs(stats.rate() - stats.success_probability) / sd
                            : (stats.rate() == stats.success_probability ? 0.0 : 1e300);
    b.check_sigma("herald_rate_within_5_sigma", z, 5.0);
  }
}

void cmd_schmidt(const ExperimentConfig& c, Builder& b) {
  const Matrixd m = unitary_arg(c, "CNOT");
  std::vector<long> dims = c.dims;
  if (dims.empty()) {
    const long root = std::lround(std::sqrt(double(m.rows())));
    if (root * root != m.rows()) {
      throw DimensionMismatch("dimension conflict: pass --dims dA,dB for a " +
                              std::to_string(m.rows()) + "-dimensional unitary");
    }
    dims = {root, root};
  }
  if (dims.size() != 2 || dims[0] * dims[1] != m.rows()) {
    throw DimensionMismatch("dimension conflict: --dims do not multiply to " +
                            std::to_string(m.rows()));
  }
  const BipartiteUnitaryd u(UnitaryOperatord(m), dims[0], dims[1]);
  const auto os = operator_schmidt(u);
  const double su = os.entropy();
  const auto induced = induced_local_map(u, Side::first,
                                         TracedInput<double>{MaximallyMixed{}});
  const double map_s = entropy(induced);
  b.exact("dims", dims);
  b.exact("schmidt_values", real_vector(os.values));
  b.exact("schmidt_rank", os.rank());
  b.exact("S_U_bits", su);
  b.exact("induced_map_entropy_bits", map_s);
  b.check_at_most("normalization", std::abs(os.values.squaredNorm() - 1), 1e-10);
  b.check_at_most("reconstruction", (os.reconstruct() - m).norm(), 1e-9);
  b.check_at_most("induced_map_agreement", std::abs(su - map_s), 1e-9);
}

void cmd_concentrate(const ExperimentConfig& c, Builder& b) {
  if (!(c.alpha >= 0 && c.alpha <= 1)) {
    throw InvalidArgument("--alpha must lie in [0, 1]");
  }
  ConcentrationMode mode;
  if (c.mode == "exact") {
    mode = ConcentrationMode::exact_matrix;
  } else if (c.mode == "comb") {
    mode = ConcentrationMode::combinatorial;
  } else {
    throw io::UnknownName("unknown concentration mode '" + c.mode + "' (use exact or comb)");
  }
  const Seed seed = require_seed(c, true);
  const Complexd alpha(c.alpha, 0);
  const Complexd beta(0, std::sqrt(std::max(0.0, 1 - c.alpha * c.alpha)));
  const auto r = concentrate<double>(c.n, alpha, beta, mode, seed);
  Json dist = Json::array();
  double total = 0;
  for (const auto& rec : r.distribution) {
    dist.push_back(Json{{"k", rec.k},
                        {"term_count", rec.term_count},
                        {"probability", rec.probability},
                        {"eigenvalue", rec.eigenvalue}});
    total += rec.probability;
  }
  const double a2 = c.alpha * c.alpha;
  const double h = shannon_entropy_bits(std::vector<double>{a2, 1 - a2});
  const double yield = concentration_yield(c.n, c.alpha);
  b.exact("beta", io::complex_to_json(beta));
  b.exact("distribution", dist);
  b.exact("yield_bits", yield);
  b.exact("yield_per_copy", yield / c.n);
  b.exact("log2_expected_terms_per_copy", log2_expected_term_count(c.n, c.alpha) / c.n);
  b.exact("entropy_per_copy", h);
  b.empirical("sampled_k", r.sample.k);
  b.empirical("sampled_term_count", r.sample.term_count);
  b.check_at_most("distribution_sums_to_one", std::abs(total - 1), 1e-12);
  if (mode == ConcentrationMode::exact_matrix) {
    b.exact("simulated_sector_probabilities", doubles(r.simulated));
    b.exact("sector_entanglement_bits", doubles(r.sector_entanglement));
    b.check_at_most("sector_probabilities_match", r.max_deviation, 1e-10);
    b.check_true("equal_term_weights", r.equal_weights);
    double ent = 0;
    for (std::size_t i = 0; i < r.distribution.size(); ++i) {
      if (r.distribution[i].probability <= 0) continue;
      ent = std::max(ent, std::abs(r.sector_entanglement[i] -
                                   std::log2(double(r.distribution[i].term_count))));
    }
    b.check_at_most("sector_entanglement_is_log_term_count", ent, 1e-9);
  }
}

void cmd_superdense(const ExperimentConfig& c, Builder& b) {
  const Seed seed = require_seed(c, c.shots > 0);
  const UnitaryOperatord u(unitary_arg(c, "X"));
  const long d = long(u.dim());
  if (c.dim && *c.dim != d) {
    throw DimensionMismatch("dimension conflict: --dim " + std::to_string(*c.dim) +
                            " but the unitary is " + std::to_string(d) + "-dimensional");
  }
  const auto basis = io::make_basis(auto_basis(c, d), d, u0_arg(c));
  const auto t = superdense_send(u, basis, c.shots, seed);
  b.exact("labels", t.bob.labels);
  b.exact("coefficients", coefficients_json(t.coefficients));
  b.exact("bob_probabilities", doubles(t.bob.probabilities));
  b.exact("eavesdropper_marginal", io::matrix_to_json(t.eavesdropper));
  b.exact("eavesdropper_distance_to_maximally_mixed", t.eavesdropper_distance);
  if (t.decoded_symbol) {
    b.exact("decoded_symbol", *t.decoded_symbol);
    b.exact("classical_bits", t.classical_bits);
  }
  Json access = Json::array();
  for (const auto& s : t.access) {
    access.push_back(Json{{"stage", s.stage}, {"alice", s.alice},
                          {"channel", s.channel}, {"bob", s.bob}});
  }
  b.exact("access", access);
  double total = 0;
  for (const double p : t.bob.probabilities) total += p;
  b.check_at_most("eavesdropper_ignorance", t.eavesdropper_distance, 1e-12);
  b.check_at_most("receiver_ignorance",
                  distance_to_maximally_mixed(receiver_marginal(u)), 1e-12);
  b.check_at_most("normalization", std::abs(total - 1), 1e-10);
  if (c.shots > 0) {
    b.empirical("counts", *t.bob.counts);
    b.empirical("frequencies", doubles(t.bob.frequencies()));
    b.check_sigma("empirical_within_5_sigma",
                  max_z_score(t.bob.probabilities, *t.bob.counts, c.shots), 5.0);
  }
}

void cmd_verify(const ExperimentConfig& c, Builder& b) {
  const Seed seed = require_seed(c, true);
  const auto map = io::parse_map(c.map, c.dim);
  const auto dil = stinespring(map);
  Matrixd basis;
  if (c.ancilla_basis == "computational") {
    basis = Matrixd::Identity(dil.ancilla_dim, dil.ancilla_dim);
  } else if (c.ancilla_basis == "fourier") {
    basis = fourier_matrix<double>(dil.ancilla_dim);
  } else {
    throw io::UnknownName("unknown ancilla basis '" + c.ancilla_basis +
                          "' (use computational or fourier)");
  }
  auto record = source_record(dil, basis, c.steps, seed);
  if (c.corrupt_step) {
    if (*c.corrupt_step >= c.steps) {
      throw InvalidArgument("--corrupt-step must be below --steps");
    }
    auto& idx = record.indices[*c.corrupt_step];
    idx = (idx + 1) % record.map.size();
  }
  const auto rep = verify_sequence(dil, basis, record, seed);
  Json ops = Json::array();
  for (const auto& m : record.map.operators()) ops.push_back(io::matrix_to_json(m));
  b.exact("ancilla_dim", dil.ancilla_dim);
  b.exact("induced_kraus", ops);
  b.exact("outcome_probabilities", doubles(rep.outcome_probabilities));
  if (c.corrupt_step) {
    const auto& s = rep.steps[*c.corrupt_step];
    b.exact("corrupted_step_acceptance_probability", s.acceptance_probability);
  }
  b.empirical("outcome_counts", rep.outcome_counts);
  b.empirical("verified", rep.verified);
  b.empirical("rejected_steps", rep.rejected_steps);
  if (c.steps > 0) {
    b.check_sigma("born_rule_within_5_sigma",
                  max_z_score(rep.outcome_probabilities, rep.outcome_counts, c.steps),
                  5.0);
  }
  if (!c.corrupt_step) b.check_true("honest_record_verified", rep.verified);
}

const std::map<std::string, std::function<void(const ExperimentConfig&, Builder&)>>&
table() {
  static const std::map<std::string,
                        std::function<void(const ExperimentConfig&, Builder&)>>
      t = {{"basis", cmd_basis},         {"measure", cmd_measure},
           {"channel", cmd_channel},     {"compress", cmd_compress},
           {"retrieve", cmd_retrieve},   {"schmidt", cmd_schmidt},
           {"concentrate", cmd_concentrate}, {"superdense", cmd_superdense},
           {"verify", cmd_verify}};
  return t;
}

Report error_report(const ExperimentConfig& c, const std::string& kind,
                    const std::string& message) {
  Report r;
  r.exit_code = exit_input_error;
  r.json = Json{{"command", c.command},
                {"config", config_echo(c)},
                {"status", "input_error"},
                {"error", Json{{"kind", kind}, {"message", message}}}};
  r.text = "error (" + kind + "): " + message + "\n";
  return r;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "basis", "measure", "channel", "compress", "retrieve",
      "schmidt", "concentrate", "superdense", "verify"};
  return names;
}

Report run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto it = table().find(config.command);
  if (it == table().end()) {
    return error_report(config, "unknown_command",
                        "unknown subcommand '" + config.command + "'");
  }
  Report report;
  try {
    Builder b(config);
    it->second(config, b);
    report = b.finish(config_echo(config));
  } catch (const io::MalformedInput& e) {
    return error_report(config, "malformed_input", e.what());
  } catch (const io::UnknownName& e) {
    return error_report(config, "unknown_name", e.what());
  } catch (const DimensionMismatch& e) {
    return error_report(config, "dimension_conflict", e.what());
  } catch (const NotUnitary& e) {
    return error_report(config, "not_unitary", e.what());
  } catch (const CapacityExceeded& e) {
    return error_report(config, "capacity_exceeded", e.what());
  } catch (const Error& e) {
    return error_report(config, "invalid_argument", e.what());
  }
  if (config.timing) {
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    report.json["wall_time_s"] = elapsed.count();
    report.text += "wall time " + fmt(elapsed.count()) + " s\n";
  }
  return report;
}

}  // namespace qevol::cli
