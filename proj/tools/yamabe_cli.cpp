// Command-line front end: threshold tables, per-point bounds, c-scans,
// spherical-cap values, the bound registry and the inequality-web
// consistency check. All output is deterministic: same invocation, same
// bytes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "yamabe/emit.hpp"

namespace {

using yamabe::Rounding;
using yamabe::emit::Format;
using yamabe::emit::OutputSpec;

struct CommonOpts {
  std::string format = "text";
  std::string rounding;
  std::string output;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--rounding", opts.rounding,
                  "Override the per-column rounding rule")
      ->check(CLI::IsMember({"nearest0.1", "floor0.1", "none"}));
  cmd->add_option("--output", opts.output,
                  "Write to this path instead of standard output");
}

OutputSpec make_spec(const CommonOpts& opts) {
  OutputSpec spec;
  spec.format = opts.format == "csv"    ? Format::Csv
                : opts.format == "json" ? Format::Json
                                        : Format::Text;
  if (opts.rounding == "nearest0.1")
    spec.rounding = Rounding::NearestTenth;
  else if (opts.rounding == "floor0.1")
    spec.rounding = Rounding::FloorTenth;
  else if (opts.rounding == "none")
    spec.rounding = Rounding::None;
  return spec;
}

int deliver(const std::string& payload, const CommonOpts& opts) {
  if (opts.output.empty()) {
    std::fputs(payload.c_str(), stdout);
    return 0;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output path " << opts.output << "\n";
    return 1;
  }
  out << payload;
  return 0;
}

yamabe::relations::BoundFact parse_injection(const std::string& text) {
  const auto f = yamabe::aggregate::detail::split(text, '|');
  if (f.size() != 6)
    throw yamabe::domain_error(
        "inject: expected family|m|k|c|direction|value with '-' for no c");
  const auto fam = yamabe::relations::family_from_token(f[0]);
  if (!fam) throw yamabe::domain_error("inject: unknown family '" + f[0] + "'");
  yamabe::relations::BoundFact fact;
  fact.family = *fam;
  fact.m = std::stoi(f[1]);
  fact.k = std::stoi(f[2]);
  if (f[3] != "-") fact.c = std::stod(f[3]);
  fact.direction = yamabe::aggregate::detail::parse_direction(f[4]);
  fact.value = std::stod(f[5]);
  fact.provenance = text;
  return fact;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yamabe-type threshold constants: tables, bounds and the "
               "inequality web"};
  app.require_subcommand(1);

  // table3
  auto* table3 = app.add_subcommand(
      "table3",
      "Codimension-3 table; CSV columns: m, q_sphere (Q*(S^m), nearest "
      "0.1), inf_L (infimum of L_m(c^2) over c, floor 0.1)");
  int t3_from = 7, t3_to = 15;
  CommonOpts t3_opts;
  table3->add_option("--from", t3_from, "First dimension")->capture_default_str();
  table3->add_option("--to", t3_to, "Last dimension")->capture_default_str();
  add_common(table3, t3_opts);

  // table1
  auto* table1 = app.add_subcommand(
      "table1",
      "Aggregate table; CSV columns: m, q_sphere (nearest 0.1), "
      "lambda_spin_min (min over k = 2..m-3, floor 0.1), q_hp2xr "
      "(floor 0.1, '-' where absent)");
  int t1_from = 5, t1_to = 13;
  CommonOpts t1_opts;
  table1->add_option("--from", t1_from, "First dimension")->capture_default_str();
  table1->add_option("--to", t1_to, "Last dimension")->capture_default_str();
  add_common(table1, t1_opts);

  // bound
  auto* bound = app.add_subcommand(
      "bound",
      "Applicable bounds at one (m, k), optionally at a fixed c; CSV "
      "columns: quantity, value, rounded, provenance");
  int b_m = 0, b_k = 0;
  double b_c = -1;
  CommonOpts b_opts;
  bound->add_option("--m", b_m, "Total dimension")->required();
  bound->add_option("--k", b_k, "Surgery dimension")->required();
  bound->add_option("--c", b_c, "Hyperbolic rescaling in [0, 1]");
  add_common(bound, b_opts);

  // scan
  auto* scan = app.add_subcommand(
      "scan",
      "CSV scan of c against the in-scope bound at (m, k); columns: c, "
      "bound (raw doubles)");
  int s_m = 0, s_k = 0, s_samples = 101;
  CommonOpts s_opts;
  scan->add_option("--m", s_m, "Total dimension")->required();
  scan->add_option("--k", s_k, "Surgery dimension")->required();
  scan->add_option("--samples", s_samples, "Sample count including endpoints")
      ->capture_default_str();
  scan->add_option("--output", s_opts.output,
                   "Write to this path instead of standard output");

  // cap
  auto* cap = app.add_subcommand(
      "cap", "Spherical-cap eigenvalue and its renormalized value");
  int c_m = 0;
  double c_r = 0;
  CommonOpts c_opts;
  cap->add_option("--m", c_m, "Sphere dimension")->required();
  cap->add_option("--r", c_r, "Cap radius in (0, pi]")->required();
  add_common(cap, c_opts);

  // relations check
  auto* relations = app.add_subcommand("relations", "Inequality-web commands");
  relations->require_subcommand(1);
  auto* check = relations->add_subcommand(
      "check", "Propagate the full web to a fixpoint and report");
  std::vector<std::string> injections;
  CommonOpts r_opts;
  check->add_option("--inject", injections,
                    "Extra fact family|m|k|c|direction|value ('-' for no c)");
  add_common(check, r_opts);

  // registry dump
  auto* registry = app.add_subcommand("registry", "Bound-registry commands");
  registry->require_subcommand(1);
  auto* dump = registry->add_subcommand("dump", "Serialize the registry");
  CommonOpts g_opts;
  add_common(dump, g_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // help goes to stdout, errors to stderr
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*table3)
      return deliver(yamabe::emit::table3(t3_from, t3_to, make_spec(t3_opts)),
                     t3_opts);
    if (*table1)
      return deliver(
          yamabe::emit::table1(t1_from, t1_to,
                               yamabe::aggregate::builtin_registry(),
                               make_spec(t1_opts)),
          t1_opts);
    if (*bound) {
      std::optional<double> c;
      if (bound->count("--c")) c = b_c;
      return deliver(
          yamabe::emit::bound_report(b_m, b_k, c,
                                     yamabe::aggregate::builtin_registry(),
                                     make_spec(b_opts)),
          b_opts);
    }
    if (*scan)
      return deliver(yamabe::emit::scan_csv(s_m, s_k, s_samples), s_opts);
    if (*cap)
      return deliver(yamabe::emit::cap_report(c_m, c_r, make_spec(c_opts)),
                     c_opts);
    if (*check) {
      std::vector<yamabe::relations::BoundFact> facts;
      for (const auto& text : injections)
        facts.push_back(parse_injection(text));
      auto graph = yamabe::relations::build_relation_graph();
      const auto report = yamabe::relations::check_consistency(
          graph, yamabe::aggregate::builtin_registry(), facts);
      const int rc = deliver(
          yamabe::emit::relations_report(report, graph,
                                         make_spec(r_opts).format),
          r_opts);
      if (rc != 0) return rc;
      return report.consistent ? 0 : 3;
    }
    if (*dump)
      return deliver(
          yamabe::emit::registry_dump(yamabe::aggregate::builtin_registry(),
                                      make_spec(g_opts).format),
          g_opts);
  } catch (const yamabe::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
