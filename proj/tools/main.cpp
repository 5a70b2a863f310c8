// Command-line interface to the exact residue-pairing engine.
//
// Subcommands:
//   omega       coefficient table of the bilinear pairing
//   traces      pair-trace constants of the middle-degree sign operator
//   crosscheck  compare the independent computation pipelines
//   cocycle     verify the Hochschild 2-cocycle identity on random data
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wres/json_io.hpp"
#include "wres/pipelines.hpp"
#include "wres/trig.hpp"

namespace {

using nlohmann::ordered_json;
using namespace wres;

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(path);
  if (!f) {
    std::cerr << "wres: cannot open output file: " << path << "\n";
    return 2;
  }
  f << text;
  return 0;
}

bool check_even_dim(int dim) {
  if (dim >= 2 && dim % 2 == 0) return true;
  std::cerr << "wres: --dim must be an even integer >= 2\n";
  return false;
}

SphereConvention parse_convention(const std::string& s) {
  return s == "surface" ? SphereConvention::surface_area : SphereConvention::mass_one;
}

int run_omega(int dim, const std::string& convention, const std::string& partials,
              const std::string& format, const std::string& out) {
  if (!check_even_dim(dim)) return 2;
  OutputDocument doc;
  doc.table = taylor_omega_coefficients(dim, parse_convention(convention));
  doc.partials = partials;
  doc.meta["pipeline"] = "series";
  doc.meta["pairing"] =
      partials == "D" ? "sum of entry * D^a f * D^b h"
                      : "sign-normalized: (-1)^(n/2) * pairing = sum of entry * partial^a f * "
                        "partial^b h";
  if (format == "text") return emit(render_text(doc), out);
  if (format == "latex") return emit(render_latex(doc), out);
  return emit(to_json_string(doc), out);
}

int run_traces(int dim, const std::string& format, const std::string& out) {
  if (!check_even_dim(dim)) return 2;
  ordered_json rows = ordered_json::array();
  std::ostringstream text;
  text << "pair-trace constants, dim " << dim << "\n";
  text << "  m  rank  a  b  A  f_trace\n";
  for (int m = 0; m <= dim; ++m) {
    const TracePair tp = trace_pair(dim, m);
    const Rational f = f_symbol_trace(dim, m);
    ordered_json row;
    row["m"] = m;
    row["rank"] = binomial_int(dim, m).get_str();
    row["a"] = tp.a.get_str();
    row["b"] = tp.b.get_str();
    row["A"] = tp.A.get_str();
    row["f_trace"] = f.to_string();
    rows.push_back(std::move(row));
    text << "  " << m << "  " << binomial_int(dim, m).get_str() << "  " << tp.a.get_str() << "  "
         << tp.b.get_str() << "  " << tp.A.get_str() << "  " << f.to_string() << "\n";
  }
  if (format == "text") return emit(text.str(), out);
  ordered_json doc;
  doc["dim"] = dim;
  doc["rows"] = std::move(rows);
  return emit(doc.dump(2) + "\n", out);
}

int run_crosscheck(int dim, int trials, uint64_t seed, const std::string& format,
                   const std::string& out) {
  if (!check_even_dim(dim)) return 2;
  const CrosscheckReport rep = crosscheck_pipelines(dim, trials, seed);
  if (format == "text") {
    std::ostringstream text;
    text << "crosscheck dim " << dim << ": " << (rep.ok ? "ok" : "FAIL") << ", table entries "
         << rep.table_entries << ", composed pairs " << rep.pairs_checked << "\n";
    for (const auto& f : rep.failures) text << "  " << f << "\n";
    const int rc = emit(text.str(), out);
    return rc != 0 ? rc : (rep.ok ? 0 : 1);
  }
  ordered_json doc;
  doc["dim"] = rep.dim;
  doc["ok"] = rep.ok;
  doc["table_entries"] = rep.table_entries;
  doc["pairs_checked"] = rep.pairs_checked;
  doc["seed"] = seed;
  doc["failures"] = rep.failures;
  const int rc = emit(doc.dump(2) + "\n", out);
  return rc != 0 ? rc : (rep.ok ? 0 : 1);
}

int run_cocycle(int dim, int trials, int modes, uint64_t seed, const std::string& format,
                const std::string& out) {
  if (!check_even_dim(dim)) return 2;
  const BilinearForm table = taylor_omega_coefficients(dim, SphereConvention::mass_one);
  SplitMix64 rng(seed);
  int nonzero = 0;
  std::vector<std::string> examples;
  for (int t = 0; t < trials; ++t) {
    const TrigPolynomial f0 = random_real_trig(dim, modes, 2, rng);
    const TrigPolynomial f1 = random_real_trig(dim, modes, 2, rng);
    const TrigPolynomial f2 = random_real_trig(dim, modes, 2, rng);
    const TrigPolynomial f3 = random_real_trig(dim, modes, 2, rng);
    const GaussianRational b = hochschild_b(table, f0, f1, f2, f3);
    if (!b.is_zero()) {
      ++nonzero;
      if (examples.size() < 5)
        examples.push_back("trial " + std::to_string(t) + ": b = " + b.to_string());
    }
  }
  const bool ok = nonzero == 0;
  if (format == "text") {
    std::ostringstream text;
    text << "cocycle dim " << dim << ": " << (ok ? "ok" : "FAIL") << ", trials " << trials
         << ", modes " << modes << ", seed " << seed << ", nonzero coboundaries " << nonzero
         << "\n";
    for (const auto& e : examples) text << "  " << e << "\n";
    const int rc = emit(text.str(), out);
    return rc != 0 ? rc : (ok ? 0 : 1);
  }
  ordered_json doc;
  doc["dim"] = dim;
  doc["ok"] = ok;
  doc["trials"] = trials;
  doc["modes"] = modes;
  doc["seed"] = seed;
  doc["table_entries"] = static_cast<int>(table.entries.size());
  doc["nonzero"] = nonzero;
  doc["examples"] = examples;
  const int rc = emit(doc.dump(2) + "\n", out);
  return rc != 0 ? rc : (ok ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact residue pairing for the flat middle-degree sign operator"};
  app.require_subcommand(1);

  int dim = 0;
  std::string convention = "mass-one";
  std::string partials = "ordinary";
  std::string format = "json";
  std::string out;
  int trials = -1;
  int modes = 2;
  uint64_t seed = 1;

  CLI::App* omega = app.add_subcommand("omega", "coefficient table of the residue pairing");
  omega->add_option("--dim", dim, "even dimension")->required();
  omega->add_option("--convention", convention, "sphere normalization")
      ->check(CLI::IsMember({"mass-one", "surface"}));
  omega->add_option("--partials", partials, "derivative basis of the output")
      ->check(CLI::IsMember({"ordinary", "D"}));
  omega->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "text", "latex"}));
  omega->add_option("--out", out, "write to a file instead of stdout");

  CLI::App* traces = app.add_subcommand("traces", "pair-trace constants by form degree");
  traces->add_option("--dim", dim, "even dimension")->required();
  traces->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
  traces->add_option("--out", out, "write to a file instead of stdout");

  CLI::App* crosscheck = app.add_subcommand("crosscheck", "compare the independent pipelines");
  crosscheck->add_option("--dim", dim, "even dimension")->required();
  crosscheck->add_option("--trials", trials,
                         "slot pairs recomputed by full composition (dim >= 6)");
  crosscheck->add_option("--seed", seed, "random seed for sampled slot pairs");
  crosscheck->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "text"}));
  crosscheck->add_option("--out", out, "write to a file instead of stdout");

  CLI::App* cocycle = app.add_subcommand("cocycle", "hochschild 2-cocycle verification");
  cocycle->add_option("--dim", dim, "even dimension")->required();
  cocycle->add_option("--trials", trials, "number of random quadruples");
  cocycle->add_option("--modes", modes, "largest frequency component of the samples");
  cocycle->add_option("--seed", seed, "random seed for the samples");
  cocycle->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
  cocycle->add_option("--out", out, "write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(omega)) return run_omega(dim, convention, partials, format, out);
    if (app.got_subcommand(traces)) return run_traces(dim, format, out);
    if (app.got_subcommand(crosscheck))
      return run_crosscheck(dim, trials < 0 ? 20 : trials, seed, format, out);
    if (app.got_subcommand(cocycle))
      return run_cocycle(dim, trials < 0 ? 100 : trials, modes, seed, format, out);
  } catch (const std::exception& e) {
    std::cerr << "wres: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
