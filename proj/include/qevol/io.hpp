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

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qevol/cp_map.hpp"
#include "qevol/evolution_measurement.hpp"
#include "qevol/operator_basis.hpp"

namespace qevol::io {

using Json = nlohmann::ordered_json;

/// Input file could not be read or does not follow the expected format.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// A gate, channel or state shorthand that is not recognized.
class UnknownName : public Error {
 public:
  using Error::Error;
};

// {"dim": d, "re": [[...]], "im": [[...]]}; "im" may be omitted.
Matrixd matrix_from_json(const Json& j);
Json matrix_to_json(const Matrixd& m);

// {"re": [...], "im": [...]}
Vectord vector_from_json(const Json& j);
Json vector_to_json(const Vectord& v);

Json complex_to_json(Complexd z);

/// Named gates: I, X, Y, Z, H, S, T, CNOT, SWAP, IXX ((II + i XX)/sqrt 2),
/// bfield:<theta> (cos I - i sin Z), xx:<theta> (cos II - i sin XX),
/// clock:<d>, shift:<d>, weyl:<mu>,<nu>,<d>, haar:<seed>,<d>.
/// `dim` sizes I (default 2). Anything else is read as a matrix file.
Matrixd parse_unitary(const std::string& spec, std::optional<long> dim = {});

/// dephasing:<p>, depolarizing:<p>, pauli:<p0>,<p1>,<p2>,<p3>,
/// unitary:<gate>, or a Kraus file {"dim": d, "kraus": [matrix, ...]}.
KrausMapd parse_map(const std::string& spec, std::optional<long> dim = {});
Json map_to_json(const KrausMapd& map);

/// zero, plus, random:<seed>, a vector file, or bell (psi+ on system (x)
/// reference, dimension dim^2).
Vectord parse_state(const std::string& spec, long dim);

/// pauli or weyl, optionally prefixed by u0.
OperatorBasisd make_basis(const std::string& kind, long dim,
                          const std::optional<Matrixd>& u0 = {});

Json read_json_file(const std::string& path);

}  // namespace qevol::io
