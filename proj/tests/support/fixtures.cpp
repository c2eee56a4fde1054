#include "fixtures.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <stdexcept>

#include "hddl/corpus.hpp"
#include "hddl/parser.hpp"
#include "oracles.hpp"

namespace hddl::testing {

namespace {

std::string first_error(const Diagnostics& ds) {
  for (const auto& d : ds)
    if (d.severity == Severity::Error) return d.code + ": " + d.message;
  return "";
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

}  // namespace

Model load_model(const std::string& domain_text, const std::string& problem_text) {
  auto d = parse_domain_text(domain_text, 0);
  auto p = parse_problem_text(problem_text, 1);
  if (!d.ok()) throw std::runtime_error("domain: " + first_error(d.diagnostics));
  if (!p.ok()) throw std::runtime_error("problem: " + first_error(p.diagnostics));
  auto r = analyze(*d.ast, *p.ast);
  if (!r.model) throw std::runtime_error("analysis: " + first_error(r.diagnostics));
  return std::move(*r.model);
}

Model eos_model() {
  return load_model(corpus_text("eos/domain.hddl"), corpus_text("eos/problem.hddl"));
}

TimedPlan load_plan(const std::string& text) {
  auto r = parse_plan(text);
  if (!r.plan) throw std::runtime_error("plan: " + first_error(r.diagnostics));
  return std::move(*r.plan);
}

std::string corpus_text(const std::string& relative) {
  return read_text_file(corpus_dir() / relative);
}

CommandResult run_cli(const std::vector<std::string>& args, const std::string& err_file) {
  std::string cmd = quote(hddl21_bin());
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>" + (err_file.empty() ? std::string("/dev/null") : quote(err_file));
  CommandResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run " + cmd);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace hddl::testing
