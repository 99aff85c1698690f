#include "reinhardt/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "reinhardt/census.hpp"
#include "reinhardt/classify.hpp"
#include "reinhardt/construct.hpp"
#include "reinhardt/cyclo.hpp"
#include "reinhardt/errors.hpp"
#include "reinhardt/geometry.hpp"

namespace reinhardt::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ------------------------------------------------------------- records

std::string to_jsonl(const ConstructionRecord& r) {
  json j;
  j["n"] = r.n;
  j["p"] = r.p;
  j["q"] = r.q;
  j["c"] = r.c;
  j["s"] = r.s;
  j["index"] = r.index;
  j["coefficients"] = r.coefficients;
  j["composition"] = r.composition;
  j["sporadic"] = r.sporadic;
  j["period"] = r.period ? json(*r.period) : json(nullptr);
  j["reciprocal"] = r.reciprocal;
  return j.dump();
}

ConstructionRecord parse_record(std::string_view line) {
  const auto j = json::parse(line);
  ConstructionRecord r;
  r.n = j.at("n").get<int>();
  r.p = j.at("p").get<int>();
  r.q = j.at("q").get<int>();
  r.c = j.at("c").get<std::string>();
  r.s = j.at("s").get<int>();
  r.index = j.at("index").get<std::uint64_t>();
  r.coefficients = j.at("coefficients").get<std::string>();
  r.composition = j.at("composition").get<std::string>();
  r.sporadic = j.at("sporadic").get<bool>();
  if (!j.at("period").is_null()) r.period = j.at("period").get<int>();
  r.reciprocal = j.at("reciprocal").get<bool>();
  return r;
}

namespace {

// Flags shared by the subcommands, filled in by CLI11.
struct Config {
  int n = 0;
  int p = 0;
  int q = 0;
  std::string c;
  int s = 0;
  std::string mode = "construction";
  std::vector<std::string> expects;
  double budget = 1e9;
  bool budget_override = false;
  unsigned workers = 0;
  std::string checkpoint_dir;
  std::uint64_t max_chunks = 0;
  int largest_part = 0;
  std::string out_path;
  std::string classes_path;
  std::string input_path;
  std::vector<std::string> compositions;
  std::string out_dir = ".";
  int size_px = 480;
  bool no_skeleton = false;
  bool no_caption = false;
  std::string coeffs;
  std::string composition;
  std::string decompose;
  std::string formula;
  bool u_bound = false;
  bool lower_bound = false;
};

unsigned default_workers() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 0;
}

// Writes to the named file, or to `fallback` when the name is empty or "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::trunc);
      if (!file_) throw InvalidArgument("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

OddComposition composition_of_text(std::string_view text) { return OddComposition::parse(text); }

// Polynomial with constant term +1 whose composition is `comp`.
TernarySeq polynomial_of(const OddComposition& comp) {
  std::vector<std::int8_t> coeffs(static_cast<std::size_t>(comp.n()), 0);
  int pos = 0;
  std::int8_t sign = 1;
  const auto parts = comp.parts();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    coeffs[static_cast<std::size_t>(pos)] = sign;
    sign = static_cast<std::int8_t>(-sign);
    pos += parts[i];
  }
  return TernarySeq(std::move(coeffs));
}

int cmd_construct(const Config& cfg, std::ostream& out) {
  const ConstructionParams params(cfg.p, cfg.q, EvenComposition::parse(cfg.c));
  if (cfg.n != 0 && cfg.n != params.n()) {
    throw InvalidArgument("--n " + std::to_string(cfg.n) + " does not equal p*q*r = " +
                          std::to_string(params.n()));
  }
  const SpecEnumerator en(params);
  std::uint64_t first = 0, last = en.count();
  if (cfg.s != 0) {
    const Sign s = sign_from_int(cfg.s);
    const std::uint64_t half = en.count() / 2;
    first = s == Sign::Plus ? half : 0;
    last = first + half;
  }
  Output sink(cfg.out_path, out);
  const int n = params.n();
  en.run(first, last, [&](std::uint64_t index, std::span<const std::int8_t> coeffs) {
    const TernarySeq seq(std::vector<std::int8_t>(coeffs.begin(), coeffs.end()));
    const auto poly = ReinhardtPolynomial::trusted(seq, n);
    ConstructionRecord r;
    r.n = n;
    r.p = params.p();
    r.q = params.q();
    r.c = params.composition().str();
    r.s = index >= en.count() / 2 ? 1 : -1;
    r.index = index;
    r.coefficients = seq.str();
    r.composition = poly.dihedral().str();
    r.sporadic = poly.sporadic();
    r.period = poly.period();
    r.reciprocal = poly.reciprocal();
    sink.get() << to_jsonl(r) << '\n';
  });
  return kOk;
}

int cmd_census(const Config& cfg, std::ostream& out, std::ostream& err) {
  std::map<std::string, std::uint64_t> expectations;
  for (const auto& e : cfg.expects) {
    const auto eq = e.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--expect needs KEY=VALUE, got " + e);
    try {
      expectations[e.substr(0, eq)] = std::stoull(e.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw InvalidArgument("--expect value is not a count: " + e);
    }
  }
  for (const auto& [key, value] : expectations) {
    if (key != "E1" && key != "E0" && key != "reciprocal") {
      throw InvalidArgument("unknown --expect key " + key + " (use E1, E0 or reciprocal)");
    }
  }
  CensusOptions options;
  options.workers = cfg.workers != 0 ? cfg.workers : default_workers();
  options.budget = cfg.budget;
  options.budget_override = cfg.budget_override;
  if (!cfg.checkpoint_dir.empty()) options.checkpoint_dir = cfg.checkpoint_dir;
  if (cfg.max_chunks != 0) options.max_chunks = cfg.max_chunks;
  options.collect_classes = !cfg.classes_path.empty();
  if (cfg.largest_part != 0) options.largest_part = cfg.largest_part;

  CensusReport report;
  if (cfg.mode == "construction") {
    if (options.largest_part) throw InvalidArgument("--largest-part needs --mode brute-force");
    report = construction_census(cfg.n, options);
  } else if (cfg.mode == "brute-force") {
    if (options.checkpoint_dir) throw InvalidArgument("--checkpoint-dir needs --mode construction");
    report = brute_force_census(cfg.n, options);
  } else {
    throw InvalidArgument("--mode must be construction or brute-force");
  }

  Output sink(cfg.out_path, out);
  sink.get() << report_json(report) << '\n';
  if (options.collect_classes && report.complete) {
    Output classes(cfg.classes_path, out);
    write_class_list(report, classes.get());
  }
  if (!report.complete) {
    err << "census interrupted after the chunk limit; rerun with the same checkpoint directory\n";
  }

  int code = kOk;
  for (const auto& [key, expected] : expectations) {
    std::optional<std::uint64_t> actual;
    if (key == "E1") actual = report.e1;
    if (key == "E0") actual = report.e0;
    if (key == "reciprocal") actual = report.reciprocal_sporadic_classes;
    if (!report.complete) actual.reset();
    if (actual != expected) {
      err << "expectation failed: " << key << "=" << expected << ", got "
          << (actual ? std::to_string(*actual) : std::string("none")) << '\n';
      code = kExpectationFailed;
    }
  }
  return code;
}

int cmd_render(const Config& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> inputs = cfg.compositions;
  if (!cfg.input_path.empty()) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (cfg.input_path != "-") {
      file.open(cfg.input_path);
      if (!file) throw InvalidArgument("cannot read " + cfg.input_path);
      in = &file;
    }
    std::string line;
    while (std::getline(*in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      inputs.push_back(line);
    }
  }
  fs::create_directories(cfg.out_dir);
  SvgOptions options;
  options.size_px = cfg.size_px;
  options.show_skeleton = !cfg.no_skeleton;
  options.show_caption = !cfg.no_caption;
  int failures = 0;
  std::size_t lineno = 0;
  for (const auto& item : inputs) {
    ++lineno;
    try {
      std::string text = item;
      if (!item.empty() && item.front() == '{') text = json::parse(item).at("composition").get<std::string>();
      const auto canonical = canonicalize(composition_of_text(text)).canonical();
      const auto geom = polygon_vertices(canonical);
      const fs::path path = fs::path(cfg.out_dir) / svg_filename(canonical);
      std::ofstream file(path, std::ios::trunc);
      if (!file) throw InvalidArgument("cannot write " + path.string());
      file << render_svg(geom, options);
      out << path.string() << '\n';
    } catch (const std::exception& e) {
      err << "record " << lineno << ": " << e.what() << '\n';
      ++failures;
    }
  }
  return failures == 0 ? kOk : kUsage;
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

void describe(const ReinhardtPolynomial& poly, std::ostream& out) {
  out << "composition: " << poly.dihedral().str() << '\n';
  out << "parts: " << poly.dihedral().part_count() << '\n';
  if (poly.period()) {
    out << "periodic: yes (period " << *poly.period() << ", " << poly.dihedral().power_str()
        << ")\n";
  } else {
    out << "periodic: no\n";
  }
  out << "sporadic: " << yes_no(poly.sporadic()) << '\n';
  out << "reciprocal: " << yes_no(poly.reciprocal()) << '\n';
  const auto geom = polygon_vertices(poly.dihedral().canonical());
  const auto& m = geom.metrics();
  char buf[160];
  std::snprintf(buf, sizeof buf, "metrics: diameter=%.12f perimeter=%.12f width=%.12f\n",
                m.diameter, m.perimeter, m.width);
  out << buf;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  if (!cfg.formula.empty()) {
    if (cfg.formula != "2pq") throw InvalidArgument("--formula supports only 2pq");
    out << e1_formula_2pq(static_cast<std::uint64_t>(cfg.p), static_cast<std::uint64_t>(cfg.q))
               .get_str()
        << '\n';
    return kOk;
  }
  if (cfg.u_bound || cfg.lower_bound) {
    const ConstructionParams params(cfg.p, cfg.q, EvenComposition::parse(cfg.c));
    if (cfg.n != 0 && cfg.n != params.n()) throw InvalidArgument("--n does not equal p*q*r");
    if (cfg.u_bound) out << "U: " << u_bound(params).get_str() << '\n';
    if (cfg.lower_bound) {
      const auto bound = e1_lower_bound(params);
      out << "E1 lower bound: " << bound.get_str() << '\n';
    }
    return kOk;
  }
  if (cfg.coeffs.empty() == cfg.composition.empty()) {
    throw InvalidArgument("verify needs exactly one of --coeffs or --composition");
  }
  TernarySeq seq;
  int n = cfg.n;
  if (!cfg.coeffs.empty()) {
    seq = TernarySeq::parse(cfg.coeffs);
    if (n == 0) n = static_cast<int>(seq.size());
  } else {
    const auto comp = composition_of_text(cfg.composition);
    if (n != 0 && n != comp.n()) throw InvalidArgument("--n does not equal the composition total");
    n = comp.n();
    seq = polynomial_of(comp);
  }
  if (seq.size() > static_cast<std::size_t>(n)) throw InvalidArgument("more coefficients than n");
  const bool ok = seq.nonzero_count() > 0 && is_reinhardt(seq, n);
  out << "n: " << n << '\n';
  out << "reinhardt: " << yes_no(ok) << '\n';
  if (ok) describe(ReinhardtPolynomial::trusted(seq, n), out);

  if (!cfg.decompose.empty()) {
    const auto primes = parse_int_list(cfg.decompose);
    if (primes.size() != 2) throw InvalidArgument("--decompose needs p,q");
    if (seq.nonzero_count() == 0) throw InvalidArgument("cannot decompose the zero polynomial");
    const auto result = decompose_two_term(IntPolynomial::from_ternary(seq),
                                           static_cast<std::uint64_t>(n),
                                           static_cast<std::uint64_t>(primes[0]),
                                           static_cast<std::uint64_t>(primes[1]));
    if (result.status == DecompositionStatus::Found) {
      const auto caps = default_degree_caps(static_cast<std::uint64_t>(n),
                                            static_cast<std::uint64_t>(primes[0]),
                                            static_cast<std::uint64_t>(primes[1]));
      out << "f1: " << result.decomposition->f1.to_ternary(caps.f1_terms)->str() << '\n';
      out << "f2: " << result.decomposition->f2.to_ternary(caps.f2_terms)->str() << '\n';
    } else {
      out << "no decomposition (" << to_string(result.status) << ")\n";
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reinhardt polygons: construction, census, rendering and verification"};
  app.require_subcommand(1);
  Config cfg;

  auto* construct = app.add_subcommand("construct", "emit every constructed polynomial as JSONL");
  construct->add_option("--n", cfg.n, "n (checked against p*q*r)");
  construct->add_option("--p", cfg.p, "odd prime p")->required();
  construct->add_option("--q", cfg.q, "odd prime q")->required();
  construct->add_option("--c", cfg.c, "even composition of r, e.g. 1,3,2,2")->required();
  construct->add_option("--s", cfg.s, "restrict to one sign (+1 or -1)");
  construct->add_option("--out", cfg.out_path, "output file (default stdout)");

  auto* census = app.add_subcommand("census", "count sporadic and periodic classes");
  census->add_option("--n", cfg.n, "number of sides")->required();
  census->add_option("--mode", cfg.mode, "construction or brute-force");
  census->add_option("--expect", cfg.expects, "assert KEY=COUNT (E1, E0, reciprocal)");
  census->add_option("--budget", cfg.budget, "work budget");
  census->add_flag("--budget-override", cfg.budget_override, "run even above the budget");
  census->add_option("--workers", cfg.workers, "worker threads (default $REINHARDT_WORKERS)");
  census->add_option("--checkpoint-dir", cfg.checkpoint_dir, "resumable shard directory");
  census->add_option("--max-chunks", cfg.max_chunks, "stop after this many new chunks");
  census->add_option("--largest-part", cfg.largest_part, "brute force: largest part exactly m");
  census->add_option("--out", cfg.out_path, "report file (default stdout)");
  census->add_option("--classes", cfg.classes_path, "sorted JSONL class list");

  auto* render = app.add_subcommand("render", "write one SVG per composition");
  render->add_option("--input", cfg.input_path, "JSONL or one composition per line ('-' = stdin)");
  render->add_option("--composition", cfg.compositions, "composition such as [10,10,10] (repeatable)")
      ->allow_extra_args(false);
  render->add_option("--out-dir", cfg.out_dir, "directory for SVG files");
  render->add_option("--size", cfg.size_px, "image size in pixels");
  render->add_flag("--no-skeleton", cfg.no_skeleton, "omit the diameter skeleton");
  render->add_flag("--no-caption", cfg.no_caption, "omit the caption");

  auto* verify = app.add_subcommand("verify", "classify one polynomial or answer a formula query");
  verify->add_option("--n", cfg.n, "number of sides");
  verify->add_option("--coeffs", cfg.coeffs, "ternary coefficient string");
  verify->add_option("--composition", cfg.composition, "odd composition of n");
  verify->add_option("--decompose", cfg.decompose, "try F = f1 Phi_q(-z^{n/q}) + f2 Phi_p(-z^{n/p})");
  verify->add_option("--formula", cfg.formula, "closed form to evaluate (2pq)");
  verify->add_option("--p", cfg.p, "odd prime p");
  verify->add_option("--q", cfg.q, "odd prime q");
  verify->add_option("--c", cfg.c, "even composition of r");
  verify->add_flag("--u-bound", cfg.u_bound, "print the U bound for p, q, c");
  verify->add_flag("--lower-bound", cfg.lower_bound, "print the E1 lower bound for p, q, c");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (construct->parsed()) return cmd_construct(cfg, out);
    if (census->parsed()) return cmd_census(cfg, out, err);
    if (render->parsed()) return cmd_render(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out);
  } catch (const BudgetExceeded& e) {
    err << "refused: " << e.what() << " (budget " << e.budget()
        << "; pass --budget-override to run anyway)\n";
    return kBudgetRefused;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace reinhardt::cli
