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

#include "qpm/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace qpm::io {

namespace {

// Reader over one JSON object that remembers which keys were consumed, so
// leftovers can be reported as unknown fields.
class Fields {
 public:
  Fields(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw FormatError(where_ + ": expected an object");
  }

  const Json& required(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw FormatError(where_ + ": missing field '" + key + "'");
    return j_.at(key);
  }
  const Json* optional(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }
  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key()))
        throw FormatError(where_ + ": unknown field '" + item.key() + "'");
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> used_;
};

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw FormatError(what + ": expected a number");
  return j.get<double>();
}

std::string string_of(const Json& j, const std::string& what) {
  if (!j.is_string()) throw FormatError(what + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> strings(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(string_of(e, what));
  return out;
}

Complex complex_of(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw FormatError(what + ": complex entries are [re, im]");
  return {number(j[0], what), number(j[1], what)};
}

const Json& rows_of(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw FormatError(what + ": expected a non-empty matrix");
  for (const auto& row : j)
    if (!row.is_array() || row.size() != j[0].size())
      throw FormatError(what + ": rows must be arrays of equal length");
  return j;
}

RealVector real_vector(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected an array");
  RealVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number(j[i], what);
  return v;
}

Json real_vector_json(const RealVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ComplexVector complex_vector(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected an array");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_of(j[i], what);
  return v;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json complex_vector_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Alphabet alphabet_of(Fields& f, const std::string& key = "alphabet") {
  try {
    return Alphabet(strings(f.required(key), key));
  } catch (const AlphabetError& e) {
    throw FormatError(key + ": " + e.what());
  }
}

Json alphabet_json(const Alphabet& a) {
  Json out = Json::array();
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a.name(i));
  return out;
}

Symbol symbol_of(const Alphabet& a, const Json& j, const std::string& what) {
  const auto name = string_of(j, what);
  if (!a.contains(name)) throw FormatError(what + ": '" + name + "' is not in the alphabet");
  return a.index_of(name);
}

void require_valid(const ValidationReport& r) {
  if (!r.ok()) throw ValidationError(r);
}

// A label read from a number keeps the number's canonical spelling.
std::string label_of(const Json& j, const std::string& what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.dump();
  throw FormatError(what + ": values must be strings or numbers");
}

Json label_json(const std::string& label) {
  if (parse_numeric_value(label)) {
    const Json n = Json::parse(label, nullptr, false);
    if (!n.is_discarded() && n.is_number() && n.dump() == label) return n;
  }
  return label;
}

// Values are either an array in state order or a table keyed by state label.
std::vector<InformationFunction> functions_of(const Json& j, const std::vector<std::string>& states) {
  if (!j.is_array()) throw FormatError("functions: expected an array");
  std::vector<InformationFunction> out;
  for (const auto& item : j) {
    Fields f(item, "function");
    const auto name = string_of(f.required("name"), "function name");
    const auto& values = f.required("values");
    f.finish();
    std::vector<std::string> labels;
    if (values.is_object()) {
      for (const auto& s : states) {
        if (!values.contains(s))
          throw ValidationError("information function '" + name + "' is not defined on state '" + s + "'");
        labels.push_back(label_of(values.at(s), name));
      }
      if (values.size() != states.size())
        throw ValidationError("information function '" + name + "' names unknown states");
    } else if (values.is_array() && values.size() == states.size()) {
      for (const auto& v : values) labels.push_back(label_of(v, name));
    } else {
      throw ValidationError("information function '" + name + "' must give one value per hidden state");
    }
    out.push_back(InformationFunction::from_values(name, labels));
  }
  return out;
}

Json functions_json(const std::vector<InformationFunction>& fs) {
  Json out = Json::array();
  for (const auto& fn : fs) {
    Json values = Json::array();
    for (std::size_t s = 0; s < fn.domain_size(); ++s) values.push_back(label_json(fn.at(s)));
    out.push_back({{"name", fn.name}, {"values", values}});
  }
  return out;
}

Density density_of(const Json& j, DensityKind kind, const Tolerances& tol, const std::string& what) {
  const ComplexMatrix m = complex_matrix_from_json(j, what);
  require_valid(Density::check(m, kind, tol));
  return Density::make(m, kind, tol);
}

HmmParam parse_hmm(Fields& f) {
  HmmParam h{strings(f.required("states"), "states"), alphabet_of(f),
             real_matrix_from_json(f.required("emission"), "emission"),
             real_vector(f.required("initial"), "initial"),
             real_matrix_from_json(f.required("transition"), "transition")};
  f.finish();
  require_valid(validate_hmm(h));
  return h;
}

FfmcParam parse_ffmc(Fields& f) {
  FfmcParam p;
  p.states = strings(f.required("states"), "states");
  p.alphabet = alphabet_of(f);
  for (const auto& l : f.required("labels")) p.labels.push_back(symbol_of(p.alphabet, l, "labels"));
  p.initial = real_vector(f.required("initial"), "initial");
  p.transition = real_matrix_from_json(f.required("transition"), "transition");
  f.finish();
  require_valid(validate_ffmc(p));
  return p;
}

FinitaryParam parse_finitary(Fields& f) {
  FinitaryParam p;
  p.alphabet = alphabet_of(f);
  const auto& letters = f.required("letters");
  if (!letters.is_array()) throw FormatError("letters: expected one matrix per symbol");
  for (const auto& m : letters) p.letters.push_back(real_matrix_from_json(m, "letters"));
  p.initial = real_vector(f.required("initial"), "initial");
  p.end = real_vector(f.required("end"), "end");
  f.finish();
  require_valid(validate_finitary(p));
  return p;
}

QrwParam parse_qrw(Fields& f, const Tolerances& tol) {
  QrwParam q;
  q.alphabet = alphabet_of(f, "nodes");
  q.coins = strings(f.required("coins"), "coins");
  const auto& edges = f.required("edges");
  if (!edges.is_array()) throw FormatError("edges: expected an array of node pairs");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2) throw FormatError("edges: each edge is [from, to]");
    q.edges.emplace_back(symbol_of(q.alphabet, e[0], "edges"), symbol_of(q.alphabet, e[1], "edges"));
  }
  q.unitary = complex_matrix_from_json(f.required("unitary"), "unitary");
  q.initial = complex_vector(f.required("initial"), "initial");
  f.finish();
  require_valid(validate_qrw(q, tol));
  return q;
}

OperatorSubspace subspace_of(const Json& j, const Tolerances& tol) {
  Fields f(j, "subspace");
  const auto kind = string_of(f.required("kind"), "subspace kind");
  OperatorSubspace s;
  if (kind == "diagonal" || kind == "full") {
    const auto& n = f.required("dim");
    if (!n.is_number_unsigned() || n.get<Index>() == 0)
      throw FormatError("subspace dim: expected a positive integer");
    s = kind == "diagonal" ? OperatorSubspace::diagonal(n.get<Index>())
                           : OperatorSubspace::full(n.get<Index>());
  } else if (kind == "general") {
    const auto& basis = f.required("basis");
    if (!basis.is_array() || basis.empty()) throw FormatError("subspace basis: expected matrices");
    std::vector<ComplexMatrix> mats;
    for (const auto& m : basis) mats.push_back(complex_matrix_from_json(m, "subspace basis"));
    s = OperatorSubspace::from_basis(std::move(mats), tol);
  } else {
    throw FormatError("subspace kind must be diagonal, full or general");
  }
  f.finish();
  return s;
}

bool is_standard_full(const OperatorSubspace& s) {
  if (s.kind() != SubspaceKind::Full) return false;
  const auto reference = OperatorSubspace::full(s.ambient_dim());
  for (std::size_t i = 0; i < s.basis().size(); ++i)
    if ((s.basis()[i] - reference.basis()[i]).norm() != 0.0) return false;
  return true;
}

Json subspace_json(const OperatorSubspace& s) {
  if (s.kind() == SubspaceKind::Diagonal) return {{"kind", "diagonal"}, {"dim", s.ambient_dim()}};
  if (is_standard_full(s)) return {{"kind", "full"}, {"dim", s.ambient_dim()}};
  Json basis = Json::array();
  for (const auto& m : s.basis()) basis.push_back(complex_matrix_to_json(m));
  return {{"kind", "general"}, {"basis", basis}};
}

QuantumChain parse_chain(Fields& f, ChainKind kind, const Tolerances& tol) {
  Alphabet alphabet = alphabet_of(f);
  OperatorSubspace space = subspace_of(f.required("subspace"), tol);
  const auto& ops = f.required("operators");
  if (!ops.is_array()) throw FormatError("operators: expected one coordinate matrix per symbol");
  std::vector<SuperOperator> letter_ops;
  for (const auto& m : ops) letter_ops.push_back({real_matrix_from_json(m, "operators")});
  const DensityKind dk = kind == ChainKind::QMC ? DensityKind::Quantum : DensityKind::Generalized;
  Density initial = density_of(f.required("initial"), dk, tol, "initial");
  f.finish();
  auto c = QuantumChain::make(std::move(alphabet), std::move(space), std::move(letter_ops),
                              std::move(initial), kind, tol);
  ChainValidationOptions opts;
  opts.tol = tol;
  require_valid(validate_chain(c, opts));
  return c;
}

DensityModel parse_density(Fields& f, const Tolerances& tol) {
  DensityModel d;
  DensityKind kind = DensityKind::Generalized;
  if (const auto* k = f.optional("density_kind")) {
    const auto s = string_of(*k, "density_kind");
    if (s == "quantum")
      kind = DensityKind::Quantum;
    else if (s != "generalized")
      throw FormatError("density_kind must be quantum or generalized");
  }
  d.density = density_of(f.required("density"), kind, tol, "density");
  if (const auto* s = f.optional("states")) {
    d.states = strings(*s, "states");
    if (static_cast<Index>(d.states.size()) != d.density.dim())
      throw ValidationError("states: one label per coordinate is required");
  }
  if (const auto* fs = f.optional("functions")) {
    if (d.states.empty())
      for (Index i = 0; i < d.density.dim(); ++i) d.states.push_back("w" + std::to_string(i + 1));
    d.functions = functions_of(*fs, d.states);
  }
  f.finish();
  return d;
}

InfoFunctionsModel parse_info(Fields& f) {
  InfoFunctionsModel m;
  m.states = strings(f.required("states"), "states");
  m.functions = functions_of(f.required("functions"), m.states);
  f.finish();
  return m;
}

}  // namespace

HiddenStateBasis DensityModel::basis() const {
  return HiddenStateBasis::standard(density.dim(), states);
}

std::string kind_name(const Model& m) {
  struct Visitor {
    std::string operator()(const HmmParam&) const { return "hmm"; }
    std::string operator()(const FfmcParam&) const { return "ffmc"; }
    std::string operator()(const FinitaryParam&) const { return "finitary"; }
    std::string operator()(const QrwParam&) const { return "qrw"; }
    std::string operator()(const QuantumChain& c) const {
      return c.kind() == ChainKind::QMC ? "qmc" : "qpm";
    }
    std::string operator()(const DensityModel&) const { return "density"; }
    std::string operator()(const InfoFunctionsModel&) const { return "info_functions"; }
  };
  return std::visit(Visitor{}, m);
}

Json complex_matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix complex_matrix_from_json(const Json& j, const std::string& what) {
  rows_of(j, what);
  ComplexMatrix m(static_cast<Index>(j.size()), static_cast<Index>(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r)
    for (std::size_t c = 0; c < j[r].size(); ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = complex_of(j[r][c], what);
  return m;
}

Json real_matrix_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(real_vector_json(m.row(i).transpose()));
  return rows;
}

RealMatrix real_matrix_from_json(const Json& j, const std::string& what) {
  rows_of(j, what);
  RealMatrix m(static_cast<Index>(j.size()), static_cast<Index>(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r)
    for (std::size_t c = 0; c < j[r].size(); ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = number(j[r][c], what);
  return m;
}

Model parse_model(const Json& j, const Tolerances& tol) {
  Fields f(j, "model");
  const auto version = string_of(f.required("schema_version"), "schema_version");
  if (version != kSchemaVersion)
    throw FormatError("unsupported schema_version '" + version + "' (expected " + kSchemaVersion + ")");
  const auto kind = string_of(f.required("kind"), "kind");
  if (kind == "hmm") return parse_hmm(f);
  if (kind == "ffmc") return parse_ffmc(f);
  if (kind == "finitary") return parse_finitary(f);
  if (kind == "qrw") return parse_qrw(f, tol);
  if (kind == "qmc") return parse_chain(f, ChainKind::QMC, tol);
  if (kind == "qpm") return parse_chain(f, ChainKind::QPM, tol);
  if (kind == "density") return parse_density(f, tol);
  if (kind == "info_functions") return parse_info(f);
  throw FormatError("unknown model kind '" + kind + "'");
}

Model load_model(const std::filesystem::path& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return parse_model(j, tol);
}

Json to_json(const Model& m) {
  Json j = {{"schema_version", kSchemaVersion}, {"kind", kind_name(m)}};
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, HmmParam>) {
          j["alphabet"] = alphabet_json(model.alphabet);
          j["states"] = model.states;
          j["emission"] = real_matrix_to_json(model.emission);
          j["initial"] = real_vector_json(model.initial);
          j["transition"] = real_matrix_to_json(model.transition);
        } else if constexpr (std::is_same_v<T, FfmcParam>) {
          j["alphabet"] = alphabet_json(model.alphabet);
          j["states"] = model.states;
          Json labels = Json::array();
          for (Symbol s : model.labels) labels.push_back(model.alphabet.name(s));
          j["labels"] = labels;
          j["initial"] = real_vector_json(model.initial);
          j["transition"] = real_matrix_to_json(model.transition);
        } else if constexpr (std::is_same_v<T, FinitaryParam>) {
          j["alphabet"] = alphabet_json(model.alphabet);
          Json letters = Json::array();
          for (const auto& m : model.letters) letters.push_back(real_matrix_to_json(m));
          j["letters"] = letters;
          j["initial"] = real_vector_json(model.initial);
          j["end"] = real_vector_json(model.end);
        } else if constexpr (std::is_same_v<T, QrwParam>) {
          j["nodes"] = alphabet_json(model.alphabet);
          j["coins"] = model.coins;
          Json edges = Json::array();
          for (const auto& [a, b] : model.edges)
            edges.push_back({model.alphabet.name(a), model.alphabet.name(b)});
          j["edges"] = edges;
          j["unitary"] = complex_matrix_to_json(model.unitary);
          j["initial"] = complex_vector_json(model.initial);
        } else if constexpr (std::is_same_v<T, QuantumChain>) {
          j["alphabet"] = alphabet_json(model.alphabet());
          j["subspace"] = subspace_json(model.subspace());
          Json ops = Json::array();
          for (const auto& op : model.letter_ops()) ops.push_back(real_matrix_to_json(op.coords));
          j["operators"] = ops;
          j["initial"] = complex_matrix_to_json(model.initial().matrix());
        } else if constexpr (std::is_same_v<T, DensityModel>) {
          j["density"] = complex_matrix_to_json(model.density.matrix());
          j["density_kind"] = model.density.kind() == DensityKind::Quantum ? "quantum" : "generalized";
          if (!model.states.empty()) j["states"] = model.states;
          if (!model.functions.empty()) j["functions"] = functions_json(model.functions);
        } else {
          j["states"] = model.states;
          j["functions"] = functions_json(model.functions);
        }
      },
      m);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void save_model(const std::filesystem::path& path, const Model& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << dump(to_json(m));
}

Json to_json(const Tolerances& t) {
  return {{"hermitian", t.hermitian}, {"psd", t.psd},           {"trace", t.trace},
          {"recon", t.recon},         {"eval", t.eval},         {"rank", t.rank},
          {"unitary", t.unitary},     {"equiv", t.equiv},       {"residual", t.residual},
          {"closure", t.closure},     {"clamp", t.clamp},       {"degenerate", t.degenerate}};
}

Tolerances tolerances_from_json(const Json& j, Tolerances t) {
  Fields f(j, "tolerances");
  const std::pair<const char*, double*> slots[] = {
      {"hermitian", &t.hermitian}, {"psd", &t.psd},           {"trace", &t.trace},
      {"recon", &t.recon},         {"eval", &t.eval},         {"rank", &t.rank},
      {"unitary", &t.unitary},     {"equiv", &t.equiv},       {"residual", &t.residual},
      {"closure", &t.closure},     {"clamp", &t.clamp},       {"degenerate", &t.degenerate}};
  for (const auto& [key, slot] : slots)
    if (const auto* v = f.optional(key)) {
      *slot = number(*v, key);
      if (!(*slot >= 0.0)) throw FormatError(std::string("tolerance ") + key + " must be nonnegative");
    }
  f.finish();
  return t;
}

Tolerances load_config() {
  const char* path = std::getenv("QPMKIT_CONFIG");
  if (!path || !*path) return {};
  std::ifstream in(path);
  if (!in) throw FormatError(std::string("QPMKIT_CONFIG: cannot open '") + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("QPMKIT_CONFIG: ") + e.what());
  }
  if (j.is_object() && j.size() == 1 && j.contains("tolerances")) return tolerances_from_json(j["tolerances"]);
  return tolerances_from_json(j);
}

Json to_json(const ValidationReport& r) {
  Json findings = Json::array();
  for (const auto& f : r.findings) findings.push_back({{"code", f.code}, {"message", f.message}});
  return {{"ok", r.ok()}, {"findings", findings}, {"notes", r.notes}};
}

Json to_json(const CesaroResult& r, const Alphabet& alphabet, const RealVector& letters) {
  Json dist = Json::object();
  for (std::size_t a = 0; a < alphabet.size(); ++a)
    dist[alphabet.name(a)] = letters(static_cast<Index>(a));
  return {{"limit", complex_matrix_to_json(r.limit.matrix())},
          {"density_kind", r.limit.kind() == DensityKind::Quantum ? "quantum" : "generalized"},
          {"coordinates", real_vector_json(r.coords)},
          {"method", to_string(r.method)},
          {"iterations", r.iterations},
          {"krylov_dim", r.krylov_dim},
          {"unit_multiplicity", r.unit_multiplicity},
          {"spectral_gap", r.spectral_gap},
          {"stationarity_residual", r.stationarity_residual},
          {"method_discrepancy", r.method_discrepancy},
          {"letter_distribution", dist}};
}

Json to_json(const ObservabilityReport& r) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.outcomes.size(); ++i)
    rows.push_back({{"outcome", r.outcomes[i]}, {"weight", r.probabilities(static_cast<Index>(i))}});
  Json offending = Json::array();
  for (const auto& [o, w] : r.offending) offending.push_back({{"outcome", o}, {"weight", w}});
  return {{"distribution", rows}, {"nonnegative", r.nonnegative}, {"offending", offending}};
}

Json to_json(const BellReport& r) {
  return {{"e_xy", r.e_xy},
          {"e_yz", r.e_yz},
          {"e_xz", r.e_xz},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"violated", !r.satisfied},
          {"jointly_observable", r.jointly_observable},
          {"joint", to_json(r.joint)}};
}

void write_distribution_csv(std::ostream& out, const std::vector<std::string>& header,
                            const std::vector<Outcome>& outcomes, const RealVector& weights) {
  for (const auto& h : header) out << h << ',';
  out << "weight\n";
  char buf[32];
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    for (const auto& c : outcomes[i]) out << c << ',';
    std::snprintf(buf, sizeof buf, "%.17g", weights(static_cast<Index>(i)));
    out << buf << '\n';
  }
}

}  // namespace qpm::io
