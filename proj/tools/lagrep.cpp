// lagrep: command-line driver for the Lagrangian-representation engine.
#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "lagrep/report.hpp"
#include "lagrep/wdvv.hpp"

using namespace lagrep;

namespace {

enum Exit { ok = 0, failed = 1, bad_input = 2, bound = 3 };

struct Config {
  std::string fixture;
  std::string input;
  std::string output;
  std::string point = "0,1,3";
  std::string candidate;
  int jet_bound = kDefaultJetBound;
  int triple_order = 2;
  int rden_bound = 2;
  bool json_only = false;
  ReportOptions report;
};

Json load_input(const Config& c) {
  if (!c.fixture.empty() && !c.input.empty()) throw InputError("give either --fixture or --input");
  if (!c.fixture.empty()) return fixture_json(c.fixture);
  if (c.input.empty()) throw InputError("no input: use --fixture NAME or --input FILE");
  return read_json_file(c.input);
}

void emit(const Config& c, const Json& report) {
  const std::string text = report.dump(2) + "\n";
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw InputError("cannot write " + c.output);
  out << text;
}

int run(Config& c, const std::function<Report(const Json&, const ReportOptions&)>& command) {
  ReportOptions& o = c.report;
  o.jet_bound = c.jet_bound;
  o.triple_order = static_cast<std::uint32_t>(c.triple_order);
  o.rden_bound = static_cast<unsigned>(c.rden_bound);
  o.compare_expected = !c.fixture.empty();
  if (!c.candidate.empty()) o.r_candidate = read_json_file(c.candidate);
  o.point.clear();
  std::stringstream ss(c.point);
  for (std::string item; std::getline(ss, item, ',');) o.point.push_back(item);

  const Report r = command(load_input(c), o);
  if (!c.json_only)
    for (const auto& line : r.summary) std::cerr << line << '\n';
  emit(c, r.json);
  return r.pass ? ok : failed;
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--fixture", c.fixture, "Built-in data set (wdvv3)");
  sub->add_option("--input", c.input, "System or operator JSON file")->check(CLI::ExistingFile);
  sub->add_option("--output", c.output, "Write the JSON report here instead of stdout");
  sub->add_option("--jet-bound", c.jet_bound, "Maximum jet order")->check(CLI::PositiveNumber);
  sub->add_option("--triple-order", c.triple_order, "Maximum jet order in the evidence covectors")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--rden-bound", c.rden_bound, "Maximum power per denominator factor for R")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--json", c.json_only, "Suppress the human summary on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian representations of bi-Hamiltonian pairs"};
  app.require_subcommand(1);
  Config c;

  auto* transform = app.add_subcommand("transform", "Change coordinates of A1 or A2");
  auto* derive = app.add_subcommand("derive", "Run the full derivation and certification");
  auto* check = app.add_subcommand("check", "Skew-adjointness, homogeneity, Jacobi and compatibility evidence");
  auto* curvature = app.add_subcommand("curvature", "Curvature of the symplectic metric G");
  auto* recursion = app.add_subcommand("recursion", "One step of the bi-Hamiltonian recursion");
  auto* conservation = app.add_subcommand("conservation", "Conservation of the L_n along a flow");
  for (auto* s : {transform, derive, check, curvature, recursion, conservation}) add_common(s, c);
  for (auto* s : {transform, check}) s->add_option("--operator", c.report.op, "A1 or A2");
  recursion->add_option("--density", c.report.density, "Take one step from this density instead of the Casimirs");
  conservation->add_option("--density", c.report.density, "Hamiltonian density of the flow (default: h from the input)");
  curvature->add_option("--point", c.point, "Rational point for the signature, comma separated");
  for (auto* s : {derive, recursion, conservation})
    s->add_option("--r-candidate", c.candidate, "JSON matrix to try as R")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bad_input;
  }

  try {
    if (*transform) return run(c, transform_report);
    if (*derive) return run(c, derive_report);
    if (*check) return run(c, check_report);
    if (*curvature) return run(c, curvature_report);
    if (*recursion) return run(c, recursion_report);
    if (*conservation) return run(c, conservation_report);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::input: return bad_input;
      case ErrorKind::resource_bound: return bound;
      case ErrorKind::math: return failed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  }
  return bad_input;
}
