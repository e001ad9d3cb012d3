// imapk <command> <specfile> [flags]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "imapk/cli/report.hpp"
#include "imapk/error.hpp"

int main(int argc, char** argv) {
  using namespace imapk;
  CLI::App app{"Exact invariants of piecewise monotonic interval maps"};
  std::string command, path, tol_text, partition_text;
  cli::RunOptions flags;
  bool text = false;
  app.add_option("command", command, "orbit | markov | ktheory | entropy | classify | all")->required();
  app.add_option("specfile", path, "map specification file")->required()->check(CLI::ExistingFile);
  auto* cap = app.add_option("--cap", flags.cap, "orbit / breakpoint cap")->check(CLI::PositiveNumber);
  auto* tol = app.add_option("--tol", tol_text, "Perron tolerance as a rational p/q");
  app.add_option("--partition", partition_text, "coarser Markov partition, e.g. \"[0,1/3,2/3,1]\"");
  app.add_flag("--assert-cyclic", flags.assert_cyclic, "assert that I(0,1) is cyclic");
  app.add_flag("--assert-idoc", flags.assert_idoc, "assert IDOC for an interval exchange");
  app.add_flag("--assert-orbit-infinite", flags.assert_orbit_infinite, "assert the critical orbits are infinite");
  app.add_flag("--text", text, "human-readable rendering instead of JSON");
  CLI11_PARSE(app, argc, argv);

  cli::Report report;
  try {
    cli::Command cmd = cli::parse_command(command);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    cli::MapSpecFile spec = cli::parse_spec(buf.str());
    if (tol->count() > 0) flags.tol = parse_rational(tol_text);
    if (!partition_text.empty()) {
      // Parsed as a specfile fragment so algebraic entries resolve against the declared field.
      std::string field_text;
      if (spec.field) {
        field_text = "field { poly = [";
        const auto& c = spec.field->min_poly().coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) field_text += (i ? "," : "") + c[i].get_str();
        field_text += "]; iso = [" + spec.field->lo().get_str() + "," + spec.field->hi().get_str() + "] }\n";
      }
      flags.partition = cli::parse_spec(field_text + "map { family = tent }\noptions { partition = " + partition_text +
                                        " }")
                            .options.partition;
    }
    spec.options = cli::merge_options(spec.options, flags, cap->count() > 0, tol->count() > 0);
    report = cli::run(cmd, spec);
  } catch (const Error& e) {
    report.exit_code = 1;
    report.json = {{"command", command},
                   {"error", {{"kind", std::string(error_kind_name(e.kind()))}, {"message", e.what()}}},
                   {"exit_code", 1}};
  }
  std::cout << (text ? report.text() : report.dump() + "\n");
  if (report.exit_code == 1 && report.json.contains("error"))
    std::cerr << "error: " << report.json["error"]["message"].get<std::string>() << "\n";
  return report.exit_code;
}
