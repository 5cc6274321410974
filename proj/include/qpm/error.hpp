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

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qpm {

/// Compact rendering of a double for diagnostic messages.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// One violated invariant, e.g. {"row_sum", "transition row 1 sums to 0.9"}.
struct Finding {
  std::string code;
  std::string message;
};

/// Report-style validation result. Empty findings means valid; notes carry
/// informational records such as the positivity-check method or horizon used.
struct ValidationReport {
  std::vector<Finding> findings;
  std::vector<std::string> notes;

  bool ok() const { return findings.empty(); }
  void add(std::string code, std::string message) {
    findings.push_back({std::move(code), std::move(message)});
  }
  void note(std::string text) { notes.push_back(std::move(text)); }
  void merge(const ValidationReport& other) {
    findings.insert(findings.end(), other.findings.begin(), other.findings.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }
  bool has(const std::string& code) const {
    for (const auto& f : findings)
      if (f.code == code) return true;
    return false;
  }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class AlphabetError : public Error {
 public:
  using Error::Error;
};

/// Input violates a model invariant. Carries the full report when available.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
  explicit ValidationError(ValidationReport report)
      : Error(summarize(report)), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  static std::string summarize(const ValidationReport& r) {
    std::string s = "validation failed";
    for (const auto& f : r.findings) s += "; " + f.code + ": " + f.message;
    return s;
  }
  ValidationReport report_;
};

/// Parse or schema problems in a model file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Numeric failures. The CLI maps every subclass to exit code 2.
class NumericError : public Error {
 public:
  using Error::Error;
};

class DegenerateSupportError : public NumericError {
 public:
  using NumericError::NumericError;
};

class BasisInsufficiencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SamplingError : public NumericError {
 public:
  using NumericError::NumericError;
};

class UnsupportedChainError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConsistencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace qpm
