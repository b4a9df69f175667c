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

#include "qevol/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "qevol/linalg.hpp"
#include "qevol/random.hpp"

namespace qevol::io {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s, const std::string& context) {
  double v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw UnknownName("cannot parse number '" + s + "' in '" + context + "'");
  }
  return v;
}

long to_long(const std::string& s, const std::string& context) {
  long v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw UnknownName("cannot parse integer '" + s + "' in '" + context + "'");
  }
  return v;
}

std::vector<double> numbers_after_colon(const std::string& spec) {
  std::vector<double> out;
  for (const auto& part : split(spec.substr(spec.find(':') + 1), ',')) {
    out.push_back(to_double(part, spec));
  }
  return out;
}

std::string prefix(const std::string& spec) {
  const auto colon = spec.find(':');
  return colon == std::string::npos ? spec : spec.substr(0, colon);
}

Matrixd real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  Matrixd m(Eigen::Index(rows.size()), Eigen::Index(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open input file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput("malformed JSON in '" + path + "': " + e.what());
  }
}

Matrixd matrix_from_json(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("re")) {
      throw MalformedInput("matrix object needs a \"re\" array");
    }
    const auto& re = j.at("re");
    const auto rows = Eigen::Index(re.size());
    if (rows == 0) throw MalformedInput("matrix has no rows");
    const auto cols = Eigen::Index(re.at(0).size());
    if (j.contains("dim") && j.at("dim").get<long>() != rows) {
      throw MalformedInput("matrix \"dim\" does not match the row count");
    }
    Matrixd m = Matrixd::Zero(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (Eigen::Index(re.at(std::size_t(r)).size()) != cols) {
        throw MalformedInput("matrix rows have different lengths");
      }
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = re.at(std::size_t(r)).at(std::size_t(c)).get<double>();
      }
    }
    if (j.contains("im")) {
      const auto& im = j.at("im");
      if (Eigen::Index(im.size()) != rows) {
        throw MalformedInput("\"im\" and \"re\" have different shapes");
      }
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (Eigen::Index(im.at(std::size_t(r)).size()) != cols) {
          throw MalformedInput("\"im\" and \"re\" have different shapes");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
          m(r, c) += Complexd(0, im.at(std::size_t(r)).at(std::size_t(c)).get<double>());
        }
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("matrix entry is not a number: ") + e.what());
  }
}

Json matrix_to_json(const Matrixd& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array();
    Json ri = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return Json{{"dim", m.rows()}, {"re", re}, {"im", im}};
}

Vectord vector_from_json(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("re")) {
      throw MalformedInput("vector object needs a \"re\" array");
    }
    const auto& re = j.at("re");
    Vectord v = Vectord::Zero(Eigen::Index(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) v(Eigen::Index(i)) = re.at(i).get<double>();
    if (j.contains("im")) {
      const auto& im = j.at("im");
      if (im.size() != re.size()) {
        throw MalformedInput("\"im\" and \"re\" have different lengths");
      }
      for (std::size_t i = 0; i < im.size(); ++i) {
        v(Eigen::Index(i)) += Complexd(0, im.at(i).get<double>());
      }
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("vector entry is not a number: ") + e.what());
  }
}

Json vector_to_json(const Vectord& v) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return Json{{"re", re}, {"im", im}};
}

Json complex_to_json(Complexd z) { return Json::array({z.real(), z.imag()}); }

Matrixd parse_unitary(const std::string& spec, std::optional<long> dim) {
  using std::numbers::sqrt2;
  const Complexd i(0, 1);
  const std::string head = prefix(spec);
  if (spec == "I") {
    const long d = dim.value_or(2);
    if (d < 1) throw InvalidArgument("gate I: dimension must be positive");
    return Matrixd::Identity(d, d);
  }
  if (spec == "X") return pauli<double>(1);
  if (spec == "Y") return pauli<double>(2);
  if (spec == "Z") return pauli<double>(3);
  if (spec == "H") return real_matrix({{1, 1}, {1, -1}}) / sqrt2;
  if (spec == "S") {
    Matrixd m = Matrixd::Identity(2, 2);
    m(1, 1) = i;
    return m;
  }
  if (spec == "T") {
    Matrixd m = Matrixd::Identity(2, 2);
    m(1, 1) = std::polar(1.0, std::numbers::pi / 4);
    return m;
  }
  if (spec == "CNOT") {
    return real_matrix({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  }
  if (spec == "SWAP") {
    return real_matrix({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}});
  }
  const Matrixd xx = kron<double>(pauli<double>(1), pauli<double>(1));
  if (spec == "IXX") {
    return (Matrixd::Identity(4, 4) + i * xx) / sqrt2;
  }
  if (head == "bfield" && spec.size() > head.size()) {
    const auto v = numbers_after_colon(spec);
    if (v.size() != 1) throw UnknownName("bfield takes one angle: '" + spec + "'");
    return std::cos(v[0]) * Matrixd::Identity(2, 2) - i * std::sin(v[0]) * pauli<double>(3);
  }
  if (head == "xx" && spec.size() > head.size()) {
    const auto v = numbers_after_colon(spec);
    if (v.size() != 1) throw UnknownName("xx takes one angle: '" + spec + "'");
    return std::cos(v[0]) * Matrixd::Identity(4, 4) - i * std::sin(v[0]) * xx;
  }
  if ((head == "clock" || head == "shift") && spec.size() > head.size()) {
    const long d = to_long(spec.substr(head.size() + 1), spec);
    const auto [z, x] = clock_shift<double>(d);
    return head == "clock" ? z.matrix() : x.matrix();
  }
  if (head == "weyl" && spec.size() > head.size()) {
    const auto parts = split(spec.substr(head.size() + 1), ',');
    if (parts.size() != 3) throw UnknownName("weyl takes mu,nu,d: '" + spec + "'");
    const long mu = to_long(parts[0], spec);
    const long nu = to_long(parts[1], spec);
    const long d = to_long(parts[2], spec);
    const auto [z, x] = clock_shift<double>(d);
    return matrix_power<double>(z.matrix(), int(((mu % d) + d) % d)) *
           matrix_power<double>(x.matrix(), int(((nu % d) + d) % d));
  }
  if (head == "haar" && spec.size() > head.size()) {
    const auto parts = split(spec.substr(head.size() + 1), ',');
    if (parts.size() != 2) throw UnknownName("haar takes seed,d: '" + spec + "'");
    const long seed = to_long(parts[0], spec);
    const long d = to_long(parts[1], spec);
    if (d < 1) throw InvalidArgument("haar: dimension must be positive");
    return random_unitary<double>(d, Seed(seed));
  }
  if (std::filesystem::exists(spec)) return matrix_from_json(read_json_file(spec));
  throw UnknownName("unknown gate name '" + spec +
                    "' (not a known shorthand and no such file)");
}

KrausMapd parse_map(const std::string& spec, std::optional<long> dim) {
  const std::string head = prefix(spec);
  if (head == "dephasing" && spec.size() > head.size()) {
    const auto v = numbers_after_colon(spec);
    if (v.size() != 1 || v[0] < 0 || v[0] > 1) {
      throw UnknownName("dephasing takes p in [0, 1]: '" + spec + "'");
    }
    return KrausMapd({std::sqrt(1 - v[0]) * pauli<double>(0),
                      std::sqrt(v[0]) * pauli<double>(3)});
  }
  if (head == "depolarizing" && spec.size() > head.size()) {
    const auto v = numbers_after_colon(spec);
    if (v.size() != 1 || v[0] < 0 || v[0] > 4.0 / 3.0) {
      throw UnknownName("depolarizing takes p in [0, 4/3]: '" + spec + "'");
    }
    const double p = v[0];
    return KrausMapd({std::sqrt(1 - 3 * p / 4) * pauli<double>(0),
                      std::sqrt(p / 4) * pauli<double>(1),
                      std::sqrt(p / 4) * pauli<double>(2),
                      std::sqrt(p / 4) * pauli<double>(3)});
  }
  if (head == "pauli" && spec.size() > head.size()) {
    const auto v = numbers_after_colon(spec);
    if (v.size() != 4) throw UnknownName("pauli takes four weights: '" + spec + "'");
    std::vector<Matrixd> ops;
    for (int a = 0; a < 4; ++a) {
      if (v[std::size_t(a)] < 0) throw UnknownName("negative weight in '" + spec + "'");
      ops.push_back(std::sqrt(v[std::size_t(a)]) * pauli<double>(a));
    }
    return KrausMapd(std::move(ops));
  }
  if (head == "unitary" && spec.size() > head.size()) {
    return KrausMapd::unitary(
        UnitaryOperatord(parse_unitary(spec.substr(head.size() + 1), dim)));
  }
  if (!std::filesystem::exists(spec)) {
    throw UnknownName("unknown channel name '" + spec +
                      "' (not a known shorthand and no such file)");
  }
  const Json j = read_json_file(spec);
  if (!j.is_object() || !j.contains("kraus") || !j.at("kraus").is_array()) {
    throw MalformedInput("Kraus file '" + spec + "' needs a \"kraus\" array");
  }
  std::vector<Matrixd> ops;
  for (const auto& m : j.at("kraus")) ops.push_back(matrix_from_json(m));
  if (ops.empty()) throw MalformedInput("Kraus file '" + spec + "' has no operators");
  if (j.contains("dim") && j.at("dim").get<long>() != ops.front().rows()) {
    throw MalformedInput("Kraus file '" + spec + "': \"dim\" does not match operators");
  }
  return KrausMapd(std::move(ops));
}

Json map_to_json(const KrausMapd& map) {
  Json ops = Json::array();
  for (const auto& m : map.operators()) ops.push_back(matrix_to_json(m));
  return Json{{"dim", map.dim()}, {"kraus", ops}};
}

Vectord parse_state(const std::string& spec, long dim) {
  if (spec == "zero") return Vectord::Unit(dim, 0);
  if (spec == "plus") return Vectord::Constant(dim, 1.0 / std::sqrt(double(dim)));
  if (spec == "bell") return max_entangled<double>(dim);
  if (prefix(spec) == "random" && spec.size() > 7) {
    return random_state<double>(dim, Seed(to_long(spec.substr(7), spec)));
  }
  if (!std::filesystem::exists(spec)) {
    throw UnknownName("unknown state '" + spec +
                      "' (use zero, plus, bell, random:<seed> or a vector file)");
  }
  return vector_from_json(read_json_file(spec));
}

OperatorBasisd make_basis(const std::string& kind, long dim,
                          const std::optional<Matrixd>& u0) {
  const UnitaryOperatord u0_op =
      u0 ? UnitaryOperatord(*u0) : UnitaryOperatord::identity(dim);
  if (u0_op.dim() != dim) {
    throw DimensionMismatch("dimension conflict: u0 is " +
                            std::to_string(u0_op.dim()) + "-dimensional, basis is " +
                            std::to_string(dim));
  }
  if (kind == "pauli") return pauli_basis(u0_op);
  if (kind == "weyl") return weyl_basis<double>(dim, u0_op);
  throw UnknownName("unknown basis '" + kind + "' (use pauli or weyl)");
}

}  // namespace qevol::io
