// Copyright 2026 The qpmkit Authors
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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "qpm/asymptotics.hpp"
#include "qpm/hidden_states.hpp"
#include "qpm/models.hpp"
#include "qpm/quantum_chain.hpp"
#include "qpm/tolerances.hpp"

#include "json.hpp"

namespace qpm::io {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

/// Density file: the matrix, optional hidden-state labels (one per
/// coordinate projector) and optional information functions over them.
struct DensityModel {
  Density density;
  std::vector<std::string> states;
  std::vector<InformationFunction> functions;

  HiddenStateBasis basis() const;
};

/// Stand-alone information functions over named hidden states.
struct InfoFunctionsModel {
  std::vector<std::string> states;
  std::vector<InformationFunction> functions;
};

/// QMC and QPM files both load into a QuantumChain; its kind tells them apart.
using Model = std::variant<HmmParam, FfmcParam, FinitaryParam, QrwParam, QuantumChain, DensityModel,
                           InfoFunctionsModel>;

std::string kind_name(const Model& m);

/// Parses and validates. Throws FormatError for malformed JSON, a wrong
/// schema_version or unknown fields, and ValidationError carrying every
/// violation when the payload breaks its model's invariants.
Model parse_model(const Json& j, const Tolerances& tol = {});
Model load_model(const std::filesystem::path& path, const Tolerances& tol = {});

Json to_json(const Model& m);
/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);
void save_model(const std::filesystem::path& path, const Model& m);

Json complex_matrix_to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const Json& j, const std::string& what);
Json real_matrix_to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const Json& j, const std::string& what);

Json to_json(const Tolerances& tol);
/// Overrides present keys of `base`; unknown keys are a FormatError.
Tolerances tolerances_from_json(const Json& j, Tolerances base = {});
/// Defaults, then the JSON file named by QPMKIT_CONFIG if set. The file may
/// hold the tolerance block directly or under "tolerances".
Tolerances load_config();

Json to_json(const ValidationReport& r);
Json to_json(const CesaroResult& r, const Alphabet& alphabet, const RealVector& letters);
Json to_json(const BellReport& r);
Json to_json(const ObservabilityReport& r);

/// One row per outcome: comma-joined outcome components, then the weight.
void write_distribution_csv(std::ostream& out, const std::vector<std::string>& header,
                            const std::vector<Outcome>& outcomes, const RealVector& weights);

}  // namespace qpm::io
