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

#include "qpm/process.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace qpm {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ValidationError("alphabet must not be empty");
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw ValidationError("alphabet symbols must be non-empty strings");
    if (!seen.insert(s).second) throw ValidationError("duplicate alphabet symbol '" + s + "'");
  }
}

const std::string& Alphabet::name(Symbol s) const {
  if (s >= symbols_.size()) throw AlphabetError("symbol index out of range");
  return symbols_[s];
}

Symbol Alphabet::index_of(std::string_view token) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == token) return i;
  throw AlphabetError("unknown symbol '" + std::string(token) + "'");
}

bool Alphabet::contains(std::string_view token) const {
  return std::find(symbols_.begin(), symbols_.end(), token) != symbols_.end();
}

bool Alphabet::single_char() const {
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [](const std::string& s) { return s.size() == 1; });
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  if (text.empty()) return w;
  const bool separated = text.find_first_of(", ") != std::string_view::npos;
  if (!separated && single_char()) {
    for (char c : text) w.push_back(index_of(std::string_view(&c, 1)));
    return w;
  }
  if (!separated) {
    w.push_back(index_of(text));
    return w;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find_first_of(", ", pos);
    const auto token = text.substr(pos, next == std::string_view::npos ? text.npos : next - pos);
    if (!token.empty()) w.push_back(index_of(token));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return w;
}

std::string Alphabet::format(const Word& w) const {
  std::string out;
  const bool compact = single_char();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += ',';
    out += name(w[i]);
  }
  return out;
}

void check_word(const Alphabet& alphabet, const Word& w) {
  for (Symbol s : w)
    if (s >= alphabet.size())
      throw AlphabetError("symbol index " + std::to_string(s) + " not in alphabet of size " +
                          std::to_string(alphabet.size()));
}

Word concat(const Word& v, const Word& w) {
  Word out;
  out.reserve(v.size() + w.size());
  out.insert(out.end(), v.begin(), v.end());
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

std::vector<Word> words_of_length(std::size_t k, std::size_t length) {
  std::vector<Word> out;
  if (k == 0) {
    if (length == 0) out.emplace_back();
    return out;
  }
  Word w(length, 0);
  while (true) {
    out.push_back(w);
    // odometer increment, last position fastest
    std::size_t i = length;
    while (i > 0) {
      --i;
      if (++w[i] < k) break;
      w[i] = 0;
      if (i == 0) return out;
    }
    if (length == 0) return out;
  }
}

std::vector<Word> words_up_to(std::size_t k, std::size_t max_length) {
  std::vector<Word> out;
  for (std::size_t t = 0; t <= max_length; ++t) {
    auto layer = words_of_length(k, t);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

ValidationReport check_process_axioms(const ProcessEvaluator& p, std::size_t horizon,
                                      double tol) {
  ValidationReport r;
  const double root = p(Word{});
  if (std::abs(root - 1.0) > tol)
    r.add("normalization", "p(eps) = " + format_number(root) + ", expected 1");
  const std::size_t k = p.alphabet.size();
  for (std::size_t t = 0; t <= horizon; ++t) {
    for (const auto& v : words_of_length(k, t)) {
      const double pv = p(v);
      if (pv < -tol)
        r.add("nonnegativity", "p(" + p.alphabet.format(v) + ") = " + format_number(pv));
      if (t == horizon) continue;
      double sum = 0.0;
      for (Symbol a = 0; a < k; ++a) sum += p(concat(v, Word{a}));
      if (std::abs(sum - pv) > tol)
        r.add("consistency", "sum_a p(" + p.alphabet.format(v) + "a) = " + format_number(sum) +
                                 " but p(" + p.alphabet.format(v) + ") = " + format_number(pv));
    }
  }
  r.note("process axioms checked up to horizon " + std::to_string(horizon));
  return r;
}

TruncatedHankel build_hankel(const ProcessEvaluator& p, std::size_t row_length,
                             std::size_t col_length) {
  TruncatedHankel h;
  const std::size_t k = p.alphabet.size();
  h.row_words = words_up_to(k, row_length);
  h.col_words = words_up_to(k, col_length);
  h.entries.resize(static_cast<Index>(h.row_words.size()), static_cast<Index>(h.col_words.size()));
  std::map<Word, double> cache;
  for (std::size_t i = 0; i < h.row_words.size(); ++i) {
    for (std::size_t j = 0; j < h.col_words.size(); ++j) {
      Word vw = concat(h.row_words[i], h.col_words[j]);
      auto it = cache.find(vw);
      if (it == cache.end()) {
        const double value = p(vw);
        it = cache.emplace(std::move(vw), value).first;
      }
      h.entries(static_cast<Index>(i), static_cast<Index>(j)) = it->second;
    }
  }
  return h;
}

std::size_t numerical_rank(const RealMatrix& m, double eps) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > eps * s(0)) ++r;
  return r;
}

std::size_t numerical_rank(const TruncatedHankel& h, double eps) {
  return numerical_rank(h.entries, eps);
}

std::vector<Word> select_row_basis(const TruncatedHankel& h, double eps) {
  const std::size_t target = numerical_rank(h, eps);
  std::vector<Word> chosen;
  RealMatrix rows(0, h.entries.cols());
  for (std::size_t i = 0; i < h.row_words.size() && chosen.size() < target; ++i) {
    const auto row = static_cast<Index>(i);
    // Column 0 is epsilon, so entries(i, 0) = p(v).
    const double pv = h.entries(row, 0);
    if (!(pv > eps)) continue;
    RealMatrix candidate(rows.rows() + 1, rows.cols());
    candidate.topRows(rows.rows()) = rows;
    candidate.bottomRows(1) = h.entries.row(row) / pv;
    if (numerical_rank(candidate, eps) == static_cast<std::size_t>(candidate.rows())) {
      rows = std::move(candidate);
      chosen.push_back(h.row_words[i]);
    }
  }
  if (chosen.size() < target)
    throw DegenerateSupportError("select_row_basis: rows with p(v) > eps span rank " +
                                 std::to_string(chosen.size()) + " of " +
                                 std::to_string(target));
  return chosen;
}

bool processes_equivalent(const ProcessEvaluator& a, std::size_t dim_a,
                          const ProcessEvaluator& b, std::size_t dim_b, double tol) {
  if (a.alphabet != b.alphabet) return false;
  const std::size_t k = a.alphabet.size();
  for (std::size_t t = 0; t <= dim_a + dim_b; ++t)
    for (const auto& v : words_of_length(k, t))
      if (std::abs(a(v) - b(v)) > tol) return false;
  return true;
}

void write_hankel_csv(std::ostream& out, const TruncatedHankel& h, const Alphabet& alphabet) {
  for (const auto& w : h.col_words) out << ',' << '"' << alphabet.format(w) << '"';
  out << '\n';
  for (std::size_t i = 0; i < h.row_words.size(); ++i) {
    out << '"' << alphabet.format(h.row_words[i]) << '"';
    for (Index j = 0; j < h.entries.cols(); ++j) {
      std::ostringstream cell;
      cell.precision(17);
      cell << h.entries(static_cast<Index>(i), j);
      out << ',' << cell.str();
    }
    out << '\n';
  }
}

}  // namespace qpm
