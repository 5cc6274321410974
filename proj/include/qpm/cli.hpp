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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpm/io.hpp"

namespace qpm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitUsage = 64;

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out`, diagnostics and usage text to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Process function of a generative model; nullopt for densities and
/// information-function files. `dimension` receives a finitary dimension
/// bound usable by the equivalence check.
std::optional<ProcessEvaluator> model_process(const io::Model& m, std::size_t* dimension = nullptr);

/// Chain realization: HMMs and FFMCs embed diagonally, QRWs as full QMCs,
/// finitary parameters through the Hankel construction.
std::optional<QuantumChain> model_chain(const io::Model& m, const Tolerances& tol = {});

/// Finitary representation of any process-defining model; throws
/// ValidationError for density and information-function files.
FinitaryParam model_finitary(const io::Model& m, const Tolerances& tol = {});

}  // namespace qpm::cli
