#pragma once

#include <string>
#include <string_view>

#include "imapk/cli/spec.hpp"
#include "json.hpp"

namespace imapk::cli {

enum class Command { Orbit, Markov, KTheory, Entropy, Classify, All };

Command parse_command(std::string_view name);
std::string_view to_string(Command c);

struct Report {
  nlohmann::json json;
  int exit_code = 0;  // 0 ok, 1 error, 2 classification refused for a missing assertion

  std::string dump() const { return json.dump(2); }
  std::string text() const;
};

/// Runs one slice of the pipeline. Module errors surface as a report with exit code 1.
Report run(Command command, const MapSpecFile& spec);
/// Parses then runs; parse errors become exit code 1 reports.
Report run_text(Command command, std::string_view spec_text);

/// Merges command-line flags into the options read from the spec file.
RunOptions merge_options(RunOptions from_spec, const RunOptions& flags, bool cap_set, bool tol_set);

}  // namespace imapk::cli
