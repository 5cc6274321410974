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

#include "qpm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qpm/sampling.hpp"

namespace qpm::cli {

namespace {

const std::vector<std::string> kCommands = {"validate", "eval",     "rank",   "equiv",      "convert",
                                            "simulate", "stationary", "bell", "hidden-path"};

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void usage(std::ostream& err) {
  err << "usage: qpmkit <command> [options]\n\ncommands:\n"
         "  validate <model>                         check a model file\n"
         "  eval <model> --word v                    word probability p(v)\n"
         "  rank <model> --rows L --cols L [--csv f] Hankel numerical rank\n"
         "  equiv <modelA> <modelB>                  process equivalence\n"
         "  convert <model> --to finitary|qmc|qpm    write a converted model\n"
         "  simulate <model> --length n --count k --seed s\n"
         "  stationary <model> [--method iterative|spectral]\n"
         "  bell <density> [<info_functions>]\n"
         "  hidden-path <model> --word v\n\n"
         "exit codes: 0 ok, 1 validation failure, 2 numeric failure, 64 usage\n";
}

// Shared flags: tolerance overrides and the run report.
struct Common {
  std::deque<std::pair<std::string, double>> tol_flags;  // stable addresses for CLI11
  std::string report;
  Tolerances tol;

  void attach(CLI::App* app) {
    static const char* names[] = {"hermitian", "psd",    "trace",    "recon",   "eval",  "rank",
                                  "unitary",   "equiv",  "residual", "closure", "clamp", "degenerate"};
    for (const char* n : names) {
      tol_flags.emplace_back(n, -1.0);
      app->add_option(std::string("--tol-") + n, tol_flags.back().second, std::string("tolerance: ") + n)
          ->check(CLI::NonNegativeNumber);
    }
    app->add_option("--report", report, "write a JSON run report to this path");
  }

  void resolve() {
    tol = io::load_config();
    io::Json overrides = io::Json::object();
    for (const auto& [name, value] : tol_flags)
      if (value >= 0.0) overrides[name] = value;
    tol = io::tolerances_from_json(overrides, tol);
  }
};

struct Run {
  io::Json inputs = io::Json::object();
  io::Json results = io::Json::object();
  ValidationReport findings;
};

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path, std::ios::binary);
  if (!file) throw FormatError("cannot write '" + path + "'");
  return file;
}

ProcessEvaluator require_process(const io::Model& m, std::size_t* dim = nullptr) {
  auto p = model_process(m, dim);
  if (!p) throw ValidationError("a " + io::kind_name(m) + " file does not define a process");
  return *p;
}

QuantumChain require_chain(const io::Model& m, const Tolerances& tol) {
  auto c = model_chain(m, tol);
  if (!c) throw ValidationError("a " + io::kind_name(m) + " file does not define a chain");
  return *c;
}

void cmd_validate(const std::string& path, const Tolerances& tol, Run& run, std::ostream& out) {
  const auto m = io::load_model(path, tol);
  ValidationReport r;
  if (const auto* c = std::get_if<QuantumChain>(&m)) {
    ChainValidationOptions opts;
    opts.tol = tol;
    r = validate_chain(*c, opts);
  }
  run.findings.merge(r);
  run.results["kind"] = io::kind_name(m);
  out << "valid " << io::kind_name(m) << '\n';
  for (const auto& n : r.notes) out << "note: " << n << '\n';
}

void cmd_eval(const std::string& path, const std::string& word, const Tolerances& tol, Run& run,
              std::ostream& out) {
  const auto m = io::load_model(path, tol);
  const auto p = require_process(m);
  const double v = p(p.alphabet.parse(word));
  run.results["word"] = word;
  run.results["probability"] = v;
  out << format_double(v) << '\n';
}

void cmd_rank(const std::string& path, std::size_t rows, std::size_t cols, const std::string& csv,
              const Tolerances& tol, Run& run, std::ostream& out) {
  const auto m = io::load_model(path, tol);
  const auto p = require_process(m);
  const auto h = build_hankel(p, rows, cols);
  const auto rank = numerical_rank(h, tol.rank);
  run.results["rank"] = rank;
  run.results["rows"] = h.row_words.size();
  run.results["cols"] = h.col_words.size();
  out << rank << '\n';
  if (!csv.empty()) {
    std::ofstream file;
    write_hankel_csv(open_output(csv, file, out), h, p.alphabet);
  }
}

void cmd_equiv(const std::string& a, const std::string& b, const Tolerances& tol, Run& run,
               std::ostream& out) {
  std::size_t da = 0, db = 0;
  const auto ma = io::load_model(a, tol);
  const auto mb = io::load_model(b, tol);
  const auto pa = require_process(ma, &da);
  const auto pb = require_process(mb, &db);
  if (!(pa.alphabet == pb.alphabet)) throw ValidationError("equiv: the models use different alphabets");
  const bool eq = finitary_equivalent(model_finitary(ma, tol), model_finitary(mb, tol), tol.equiv);
  run.results["equivalent"] = eq;
  run.results["horizon"] = da + db;
  out << (eq ? "equivalent" : "not equivalent") << '\n';
}

io::Model convert(const io::Model& m, const std::string& target, const Tolerances& tol) {
  const std::string from = io::kind_name(m);
  auto unsupported = [&]() -> io::Model {
    throw ValidationError("cannot convert " + from + " to " + target);
  };
  if (target == "finitary") {
    if (const auto* h = std::get_if<HmmParam>(&m)) return hmm_to_finitary(*h);
    if (const auto* f = std::get_if<FfmcParam>(&m)) return hmm_to_finitary(ffmc_to_hmm(*f));
    if (const auto* f = std::get_if<FinitaryParam>(&m)) return *f;
    if (const auto* c = std::get_if<QuantumChain>(&m)) return qpm_to_finitary(*c);
    if (const auto* q = std::get_if<QrwParam>(&m)) return qpm_to_finitary(qrw_to_qmc(*q, tol));
    return unsupported();
  }
  if (target == "qmc") {
    if (const auto* h = std::get_if<HmmParam>(&m)) return hmm_to_qmc(*h);
    if (const auto* f = std::get_if<FfmcParam>(&m)) return hmm_to_qmc(ffmc_to_hmm(*f));
    if (const auto* q = std::get_if<QrwParam>(&m)) return qrw_to_qmc(*q, tol);
    if (const auto* c = std::get_if<QuantumChain>(&m)) {
      if (c->kind() == ChainKind::QMC) return *c;
      auto promoted = QuantumChain::make(c->alphabet(), c->subspace(), c->letter_ops(),
                                         Density::make(c->initial().matrix(), DensityKind::Quantum, tol),
                                         ChainKind::QMC, tol);
      ChainValidationOptions opts;
      opts.tol = tol;
      const auto r = validate_chain(promoted, opts);
      if (!r.ok()) throw ValidationError(r);
      return promoted;
    }
    return unsupported();
  }
  if (target == "qpm") {
    if (const auto* c = std::get_if<QuantumChain>(&m))
      return QuantumChain::make(c->alphabet(), c->subspace(), c->letter_ops(),
                                Density::make(c->initial().matrix(), DensityKind::Generalized, tol),
                                ChainKind::QPM, tol);
    if (const auto* f = std::get_if<FinitaryParam>(&m)) return finitary_to_qpm(*f, 0, tol);
    if (const auto* h = std::get_if<HmmParam>(&m)) return finitary_to_qpm(hmm_to_finitary(*h), 0, tol);
    if (const auto* f = std::get_if<FfmcParam>(&m))
      return finitary_to_qpm(hmm_to_finitary(ffmc_to_hmm(*f)), 0, tol);
    if (const auto* q = std::get_if<QrwParam>(&m)) return convert(qrw_to_qmc(*q, tol), "qpm", tol);
    return unsupported();
  }
  throw ValidationError("--to must be finitary, qmc or qpm");
}

void cmd_convert(const std::string& path, const std::string& target, const std::string& out_path,
                 const Tolerances& tol, Run& run, std::ostream& out) {
  const auto m = io::load_model(path, tol);
  const auto converted = convert(m, target, tol);
  run.results["from"] = io::kind_name(m);
  run.results["to"] = io::kind_name(converted);
  std::ofstream file;
  open_output(out_path, file, out) << io::dump(io::to_json(converted));
}

template <typename Model>
std::vector<Word> sample_parallel(const Model& model, std::size_t length, std::size_t count,
                                  std::uint64_t seed, std::size_t workers) {
  std::vector<Word> words(count);
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) words[i] = sample_trajectory(model, length, seed, i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return words;
}

void cmd_simulate(const std::string& path, std::size_t length, std::size_t count, std::uint64_t seed,
                  std::size_t workers, const Tolerances& tol, Run& run, std::ostream& out) {
  const auto m = io::load_model(path, tol);
  std::vector<Word> words;
  Alphabet alphabet;
  if (const auto* h = std::get_if<HmmParam>(&m)) {
    words = sample_parallel(*h, length, count, seed, workers);
    alphabet = h->alphabet;
  } else if (const auto* f = std::get_if<FfmcParam>(&m)) {
    words = sample_parallel(ffmc_to_hmm(*f), length, count, seed, workers);
    alphabet = f->alphabet;
  } else if (const auto* q = std::get_if<QrwParam>(&m)) {
    words = sample_parallel(*q, length, count, seed, workers);
    alphabet = q->alphabet;
  } else {
    const auto c = require_chain(m, tol);
    words = sample_parallel(c, length, count, seed, workers);
    alphabet = c.alphabet();
  }
  run.results["trajectories"] = words.size();
  for (const auto& w : words) out << alphabet.format(w) << '\n';
}

void cmd_stationary(const std::string& path, const std::string& method, const std::string& out_path,
                    const std::string& csv, const Tolerances& tol, Run& run, std::ostream& out) {
  const auto m = io::load_model(path, tol);
  const auto c = require_chain(m, tol);
  CesaroOptions opts;
  opts.method = method == "iterative" ? CesaroMethod::Iterative : CesaroMethod::Spectral;
  const auto r = cesaro_limit(c, opts);
  const RealVector letters = stationary_letter_distribution(c, r);
  run.results = io::to_json(r, c.alphabet(), letters);
  std::ofstream file;
  open_output(out_path, file, out) << io::dump(run.results);
  if (!csv.empty()) {
    std::vector<Outcome> outcomes;
    for (const auto& s : c.alphabet().symbols()) outcomes.push_back({s});
    std::ofstream csv_file;
    io::write_distribution_csv(open_output(csv, csv_file, out), {"letter"}, outcomes, letters);
  }
}

const InformationFunction& function_named(const std::vector<InformationFunction>& fs,
                                          const std::string& name) {
  for (const auto& f : fs)
    if (f.name == name) return f;
  throw ValidationError("no information function named '" + name + "'");
}

void cmd_bell(const std::string& density_path, const std::string& functions_path,
              std::vector<std::string> names, const Tolerances& tol, Run& run, std::ostream& out) {
  const auto dm = io::load_model(density_path, tol);
  const auto* d = std::get_if<io::DensityModel>(&dm);
  if (!d) throw ValidationError("bell: first argument must be a density file");
  std::vector<std::string> states = d->states;
  std::vector<InformationFunction> functions = d->functions;
  if (!functions_path.empty()) {
    const auto fm = io::load_model(functions_path, tol);
    const auto* f = std::get_if<io::InfoFunctionsModel>(&fm);
    if (!f) throw ValidationError("bell: second argument must be an info_functions file");
    states = f->states;
    functions = f->functions;
  }
  if (states.empty())
    for (Index i = 0; i < d->density.dim(); ++i) states.push_back("w" + std::to_string(i + 1));
  if (static_cast<Index>(states.size()) != d->density.dim())
    throw ValidationError("bell: one hidden state per density coordinate is required");
  if (names.empty())
    for (std::size_t i = 0; i < std::min<std::size_t>(3, functions.size()); ++i)
      names.push_back(functions[i].name);
  if (names.size() != 3) throw ValidationError("bell: three information functions are required");
  const auto basis = HiddenStateBasis::standard(d->density.dim(), states);
  const auto r = bell_check(d->density, basis, function_named(functions, names[0]),
                            function_named(functions, names[1]), function_named(functions, names[2]),
                            tol.eval);
  run.results = io::to_json(r);
  run.results["functions"] = names;
  out << "E(XY) " << format_double(r.e_xy) << '\n'
      << "E(YZ) " << format_double(r.e_yz) << '\n'
      << "E(XZ) " << format_double(r.e_xz) << '\n'
      << "lhs " << format_double(r.lhs) << '\n'
      << "rhs " << format_double(r.rhs) << '\n'
      << "violated " << (r.satisfied ? "false" : "true") << '\n'
      << "jointly_observable " << (r.jointly_observable ? "true" : "false") << '\n';
  for (const auto& [o, w] : r.joint.offending) {
    out << "offending";
    for (const auto& c : o) out << ' ' << c;
    out << ' ' << format_double(w) << '\n';
  }
}

void cmd_hidden_path(const std::string& path, const std::string& word, const Tolerances& tol, Run& run,
                     std::ostream& out) {
  const auto m = io::load_model(path, tol);
  const auto c = require_chain(m, tol);
  std::vector<std::string> labels;
  if (const auto* h = std::get_if<HmmParam>(&m)) labels = h->states;
  if (const auto* f = std::get_if<FfmcParam>(&m)) labels = f->states;
  const auto basis = HiddenStateBasis::standard(c.subspace().ambient_dim(), labels);
  const auto r = viterbi_hidden_path(c, basis, c.alphabet().parse(word), tol);
  io::Json path_json = io::Json::array();
  for (auto s : r.path) path_json.push_back(basis.labels[s]);
  run.results = {{"word", word},
                 {"path", path_json},
                 {"weight", r.weight},
                 {"negative_weights", r.negative_weights}};
  for (std::size_t i = 0; i < r.path.size(); ++i) out << (i ? " " : "") << basis.labels[r.path[i]];
  out << '\n' << format_double(r.weight) << '\n';
}

}  // namespace

std::optional<ProcessEvaluator> model_process(const io::Model& m, std::size_t* dimension) {
  std::size_t dim = 0;
  std::optional<ProcessEvaluator> p;
  if (const auto* h = std::get_if<HmmParam>(&m)) {
    p = finitary_process(hmm_to_finitary(*h));
    dim = static_cast<std::size_t>(h->initial.size());
  } else if (const auto* f = std::get_if<FfmcParam>(&m)) {
    p = finitary_process(hmm_to_finitary(ffmc_to_hmm(*f)));
    dim = static_cast<std::size_t>(f->initial.size());
  } else if (const auto* f = std::get_if<FinitaryParam>(&m)) {
    p = finitary_process(*f);
    dim = static_cast<std::size_t>(f->dimension());
  } else if (const auto* q = std::get_if<QrwParam>(&m)) {
    auto c = qrw_to_qmc(*q);
    dim = static_cast<std::size_t>(c.subspace().dim());
    p = chain_process(c);
  } else if (const auto* c = std::get_if<QuantumChain>(&m)) {
    p = chain_process(*c);
    dim = static_cast<std::size_t>(c->subspace().dim());
  }
  if (dimension) *dimension = dim;
  return p;
}

std::optional<QuantumChain> model_chain(const io::Model& m, const Tolerances& tol) {
  if (const auto* h = std::get_if<HmmParam>(&m)) return hmm_to_qmc(*h);
  if (const auto* f = std::get_if<FfmcParam>(&m)) return hmm_to_qmc(ffmc_to_hmm(*f));
  if (const auto* f = std::get_if<FinitaryParam>(&m)) return finitary_to_qpm(*f, 0, tol);
  if (const auto* q = std::get_if<QrwParam>(&m)) return qrw_to_qmc(*q, tol);
  if (const auto* c = std::get_if<QuantumChain>(&m)) return *c;
  return std::nullopt;
}

FinitaryParam model_finitary(const io::Model& m, const Tolerances& tol) {
  if (const auto* h = std::get_if<HmmParam>(&m)) return hmm_to_finitary(*h);
  if (const auto* f = std::get_if<FfmcParam>(&m)) return hmm_to_finitary(ffmc_to_hmm(*f));
  if (const auto* f = std::get_if<FinitaryParam>(&m)) return *f;
  if (const auto c = model_chain(m, tol)) return qpm_to_finitary(*c);
  throw ValidationError("a " + io::kind_name(m) + " file does not define a process");
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || std::find(kCommands.begin(), kCommands.end(), args[0]) == kCommands.end()) {
    if (!args.empty() && (args[0] == "-h" || args[0] == "--help")) {
      usage(out);
      return kExitOk;
    }
    if (!args.empty()) err << "unknown command '" << args[0] << "'\n";
    usage(err);
    return kExitUsage;
  }

  CLI::App app{"qpmkit"};
  app.require_subcommand(1);
  Common common;
  std::string model, model_b, word, target, out_path, csv, method = "spectral", functions;
  std::vector<std::string> names;
  std::size_t rows = 1, cols = 1, length = 10, count = 1, workers = 0;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "check a model file");
  validate->add_option("model", model)->required();
  auto* eval = app.add_subcommand("eval", "word probability");
  eval->add_option("model", model)->required();
  eval->add_option("--word", word)->required();
  auto* rank = app.add_subcommand("rank", "Hankel numerical rank");
  rank->add_option("model", model)->required();
  rank->add_option("--rows", rows, "longest row word")->required();
  rank->add_option("--cols", cols, "longest column word")->required();
  rank->add_option("--csv", csv, "write the truncated Hankel matrix ('-' for stdout)");
  auto* equiv = app.add_subcommand("equiv", "process equivalence");
  equiv->add_option("model_a", model)->required();
  equiv->add_option("model_b", model_b)->required();
  auto* conv = app.add_subcommand("convert", "write a converted model");
  conv->add_option("model", model)->required();
  conv->add_option("--to", target)->required()->check(CLI::IsMember({"finitary", "qmc", "qpm"}));
  conv->add_option("--out", out_path, "output path (stdout by default)");
  auto* sim = app.add_subcommand("simulate", "sample trajectories");
  sim->add_option("model", model)->required();
  sim->add_option("--length", length)->required();
  sim->add_option("--count", count)->required();
  sim->add_option("--seed", seed)->required();
  sim->add_option("--workers", workers, "worker threads (0 = hardware concurrency)");
  auto* stat = app.add_subcommand("stationary", "Cesàro limit density and letter distribution");
  stat->add_option("model", model)->required();
  stat->add_option("--method", method)->check(CLI::IsMember({"iterative", "spectral"}));
  stat->add_option("--out", out_path, "JSON output path (stdout by default)");
  stat->add_option("--csv", csv, "letter distribution CSV path");
  auto* bell = app.add_subcommand("bell", "Bell inequality check");
  bell->add_option("density", model)->required();
  bell->add_option("info_functions", functions);
  bell->add_option("--functions", names, "names of X, Y, Z (default: the first three)")->delimiter(',');
  auto* hidden = app.add_subcommand("hidden-path", "most likely hidden-state path");
  hidden->add_option("model", model)->required();
  hidden->add_option("--word", word)->required();
  for (auto* sub : app.get_subcommands({})) common.attach(sub);

  std::vector<std::string> argv_storage{"qpmkit"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.get_subcommands().front()->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    usage(err);
    return kExitUsage;
  }

  const auto* sub = app.get_subcommands().front();
  const auto started = std::chrono::steady_clock::now();
  Run run;
  run.inputs["args"] = args;
  int code = kExitOk;
  std::string error;
  try {
    common.resolve();
    const auto& tol = common.tol;
    const std::string name = sub->get_name();
    if (name == "validate") cmd_validate(model, tol, run, out);
    else if (name == "eval") cmd_eval(model, word, tol, run, out);
    else if (name == "rank") cmd_rank(model, rows, cols, csv, tol, run, out);
    else if (name == "equiv") cmd_equiv(model, model_b, tol, run, out);
    else if (name == "convert") cmd_convert(model, target, out_path, tol, run, out);
    else if (name == "simulate")
      cmd_simulate(model, length, count, seed, workers ? workers : std::max(1u, std::thread::hardware_concurrency()),
                   tol, run, out);
    else if (name == "stationary") cmd_stationary(model, method, out_path, csv, tol, run, out);
    else if (name == "bell") cmd_bell(model, functions, names, tol, run, out);
    else cmd_hidden_path(model, word, tol, run, out);
  } catch (const ValidationError& e) {
    run.findings.merge(e.report());
    if (e.report().findings.empty()) run.findings.add("validation", e.what());
    for (const auto& f : e.report().findings) err << "violation [" << f.code << "] " << f.message << '\n';
    if (e.report().findings.empty()) err << "error: " << e.what() << '\n';
    code = kExitValidation;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    run.findings.add("numeric", e.what());
    code = kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    run.findings.add("input", e.what());
    code = kExitValidation;
  }

  if (!common.report.empty()) {
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    io::Json findings = io::Json::array();
    for (const auto& f : run.findings.findings) findings.push_back({{"code", f.code}, {"message", f.message}});
    const io::Json report = {{"command", sub->get_name()},
                             {"inputs", run.inputs},
                             {"results", run.results},
                             {"tolerances", io::to_json(common.tol)},
                             {"findings", findings},
                             {"notes", run.findings.notes},
                             {"exit_code", code},
                             {"wall_time_ms", ms}};
    std::ofstream file(common.report, std::ios::binary);
    if (!file) {
      err << "error: cannot write report '" << common.report << "'\n";
      return code == kExitOk ? kExitValidation : code;
    }
    file << io::dump(report);
  }
  return code;
}

}  // namespace qpm::cli
