#pragma once

#include <string>
#include <vector>

#include "hddl/analysis.hpp"
#include "hddl/plan.hpp"

namespace hddl::testing {

/// Parses and analyses a domain/problem pair; throws when either has errors.
Model load_model(const std::string& domain_text, const std::string& problem_text);
/// The EOS domain and problem of the corpus.
Model eos_model();

TimedPlan load_plan(const std::string& text);
std::string corpus_text(const std::string& relative);

struct CommandResult {
  int status = -1;
  std::string out;
};

/// Runs the CLI with the given arguments, capturing stdout. stderr goes to
/// the given file, or is discarded.
CommandResult run_cli(const std::vector<std::string>& args, const std::string& err_file = "");

}  // namespace hddl::testing
