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

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qpm/linalg.hpp"

namespace qpm {

using Symbol = std::size_t;

/// A word is a sequence of symbol indices into an Alphabet; the empty word
/// is epsilon.
using Word = std::vector<Symbol>;

class Alphabet {
 public:
  Alphabet() = default;
  /// Throws ValidationError on an empty list or duplicate symbols.
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& name(Symbol s) const;
  /// Throws AlphabetError for unknown tokens.
  Symbol index_of(std::string_view token) const;
  bool contains(std::string_view token) const;

  /// True when every symbol is a single character, so words print compactly.
  bool single_char() const;

  /// Parses "ab" (single-character alphabets) or "a,b" / "a b". The empty
  /// string is epsilon.
  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

  bool operator==(const Alphabet& other) const = default;

 private:
  std::vector<std::string> symbols_;
};

/// Throws AlphabetError if a symbol index is out of range.
void check_word(const Alphabet& alphabet, const Word& w);

Word concat(const Word& v, const Word& w);

/// All words of exactly the given length, lexicographic in alphabet order.
std::vector<Word> words_of_length(std::size_t alphabet_size, std::size_t length);

/// All words of length <= max_length ordered by length, then lexicographically.
std::vector<Word> words_up_to(std::size_t alphabet_size, std::size_t max_length);

/// A process function p : Σ* -> R. The evaluator must be referentially
/// transparent; Hankel construction may call it concurrently.
struct ProcessEvaluator {
  Alphabet alphabet;
  std::function<double(const Word&)> eval;

  double operator()(const Word& w) const { return eval(w); }
};

/// Checks nonnegativity, marginal consistency and p(ε) = 1 for all words up
/// to the horizon.
ValidationReport check_process_axioms(const ProcessEvaluator& p, std::size_t horizon,
                                      double tol = Tolerances{}.eval);

struct TruncatedHankel {
  std::vector<Word> row_words;
  std::vector<Word> col_words;
  RealMatrix entries;  // entries(i, j) = p(row_words[i] col_words[j])
};

TruncatedHankel build_hankel(const ProcessEvaluator& p, std::size_t row_length,
                             std::size_t col_length);

/// Number of singular values above eps * sigma_max (0 for the zero matrix).
std::size_t numerical_rank(const RealMatrix& m, double eps = Tolerances{}.rank);
std::size_t numerical_rank(const TruncatedHankel& h, double eps = Tolerances{}.rank);

/// Greedy choice of row words, in enumeration order, whose normalized rows
/// p_v / p(v) are linearly independent and span the row space. Only words
/// with p(v) > eps are eligible. Throws DegenerateSupportError if those rows
/// cannot reach the numerical rank.
std::vector<Word> select_row_basis(const TruncatedHankel& h, double eps = Tolerances{}.rank);

/// Compares two processes of known finitary dimension on every word of length
/// up to d_a + d_b.
bool processes_equivalent(const ProcessEvaluator& a, std::size_t dim_a,
                          const ProcessEvaluator& b, std::size_t dim_b,
                          double tol = Tolerances{}.equiv);

/// CSV export: header row of column words, first column holds row words.
void write_hankel_csv(std::ostream& out, const TruncatedHankel& h, const Alphabet& alphabet);

}  // namespace qpm
