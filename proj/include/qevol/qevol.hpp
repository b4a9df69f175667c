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

#include "qevol/cp_map.hpp"
#include "qevol/evolution_measurement.hpp"
#include "qevol/evolution_store.hpp"
#include "qevol/interaction_entanglement.hpp"
#include "qevol/linalg.hpp"
#include "qevol/operator_basis.hpp"
#include "qevol/protocols.hpp"
#include "qevol/random.hpp"
#include "qevol/types.hpp"
