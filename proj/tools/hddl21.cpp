// hddl21: parse, check and validate HDDL 2.1 files.
//
// Exit status: 0 success, 1 language or plan error, 2 usage or I/O error.

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hddl/analysis.hpp"
#include "hddl/ast_json.hpp"
#include "hddl/parser.hpp"
#include "hddl/plan.hpp"
#include "hddl/printer.hpp"
#include "hddl/requirements.hpp"
#include "hddl/validator.hpp"

namespace {

using namespace hddl;
using nlohmann::json;

struct IoError {
  std::string path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError{path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool looks_like_problem(const std::string& text) {
  static const std::regex comment(";[^\n]*");
  static const std::regex head(R"(\(\s*define\s*\(\s*(domain|problem)\b)", std::regex::icase);
  std::string stripped = std::regex_replace(text, comment, "");
  std::smatch m;
  if (!std::regex_search(stripped, m, head)) return false;
  std::string kind = m[1];
  return kind[0] == 'p' || kind[0] == 'P';
}

class Output {
 public:
  Output(SourceManager& sm, bool structured) : sm_(sm), structured_(structured) {}

  void diagnostics(const Diagnostics& ds) {
    for (const auto& d : ds) {
      if (d.severity == Severity::Error) ++errors_;
      if (structured_) {
        diags_.push_back({{"file", sm_.name(d.span.file)},
                          {"line", d.span.start_line},
                          {"col", d.span.start_col},
                          {"end_line", d.span.end_line},
                          {"end_col", d.span.end_col},
                          {"severity", std::string(to_string(d.severity))},
                          {"code", d.code},
                          {"message", d.message},
                          {"production", d.production}});
      } else {
        std::cerr << format_diagnostic(d, sm_.name(d.span.file)) << "\n";
      }
    }
  }

  int errors() const { return errors_; }
  json& diagnostics_json() { return diags_; }

 private:
  SourceManager& sm_;
  bool structured_;
  int errors_ = 0;
  json diags_ = json::array();
};

struct Loaded {
  std::optional<ast::Domain> domain;
  std::optional<ast::Problem> problem;
};

Loaded load(SourceManager& sm, Output& out, const std::string& domain_path,
            const std::string& problem_path) {
  Loaded l;
  FileId d = sm.add(domain_path, read_file(domain_path));
  auto dr = parse_domain_text(sm.text(d), d);
  out.diagnostics(dr.diagnostics);
  l.domain = std::move(dr.ast);
  if (!problem_path.empty()) {
    FileId p = sm.add(problem_path, read_file(problem_path));
    auto pr = parse_problem_text(sm.text(p), p);
    out.diagnostics(pr.diagnostics);
    l.problem = std::move(pr.ast);
  }
  return l;
}

// Requirement gates plus semantic analysis, run on whatever trees the
// parser recovered. Returns the model when there is no error at all.
std::optional<Model> check(Output& out, Loaded& l, bool strict, bool with_problem) {
  if (!l.domain || (with_problem && !l.problem)) return std::nullopt;
  Diagnostics ds;
  for (const auto& v : check_gates(*l.domain, l.problem ? &*l.problem : nullptr))
    ds.push_back(to_diagnostic(v, strict));
  std::optional<Model> model;
  if (l.problem) {
    AnalysisResult r = analyze(*l.domain, *l.problem);
    ds.insert(ds.end(), r.diagnostics.begin(), r.diagnostics.end());
    model = std::move(r.model);
  } else {
    Diagnostics more;
    SymbolTable st = build_symbols(*l.domain, nullptr, more);
    if (!has_errors(more)) {
      Diagnostics dom = check_domain(*l.domain, st);
      more.insert(more.end(), dom.begin(), dom.end());
    }
    ds.insert(ds.end(), more.begin(), more.end());
  }
  sort_diagnostics(ds);
  out.diagnostics(ds);
  if (out.errors()) return std::nullopt;
  return model;
}

int run_parse(const std::vector<std::string>& files, bool structured) {
  SourceManager sm;
  Output out(sm, structured);
  json dumps = json::array();
  for (const auto& path : files) {
    FileId id = sm.add(path, read_file(path));
    const std::string& text = sm.text(id);
    if (looks_like_problem(text)) {
      auto r = parse_problem_text(text, id);
      out.diagnostics(r.diagnostics);
      if (!r.ast) continue;
      if (structured)
        dumps.push_back({{"file", path}, {"ast", to_json(*r.ast)}});
      else
        std::cout << print_canonical(*r.ast);
    } else {
      auto r = parse_domain_text(text, id);
      out.diagnostics(r.diagnostics);
      if (!r.ast) continue;
      if (structured)
        dumps.push_back({{"file", path}, {"ast", to_json(*r.ast)}});
      else
        std::cout << print_canonical(*r.ast);
    }
  }
  if (structured)
    std::cout << json{{"files", dumps}, {"diagnostics", out.diagnostics_json()}}.dump(2) << "\n";
  return out.errors() ? 1 : 0;
}

int run_check(const std::string& domain, const std::string& problem, bool strict,
              bool structured) {
  SourceManager sm;
  Output out(sm, structured);
  Loaded l = load(sm, out, domain, problem);
  check(out, l, strict, !problem.empty());
  if (structured)
    std::cout << json{{"diagnostics", out.diagnostics_json()}, {"errors", out.errors()}}.dump(2)
              << "\n";
  return out.errors() ? 1 : 0;
}

int run_validate(const std::string& domain, const std::string& problem, const std::string& plan,
                 const ValidatorOptions& opts, bool structured) {
  SourceManager sm;
  Output out(sm, structured);
  Loaded l = load(sm, out, domain, problem);
  FileId pid = sm.add(plan, read_file(plan));
  std::optional<Model> model = check(out, l, false, true);
  auto pr = parse_plan(sm.text(pid), pid);
  out.diagnostics(pr.diagnostics);
  if (!model || !pr.plan) {
    if (structured)
      std::cout << json{{"verdict", "error"}, {"diagnostics", out.diagnostics_json()}}.dump(2)
                << "\n";
    return 1;
  }
  ValidationReport rep = validate(*model, *pr.plan, opts);
  if (structured) {
    json j = to_json(rep);
    j["diagnostics"] = out.diagnostics_json();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << render_text(rep);
  }
  return rep.valid ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parse, check and validate HDDL 2.1 domains, problems and plans"};
  app.require_subcommand(1);
  std::string format = "text";
  auto format_opt = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "structured"}));
  };

  auto* parse = app.add_subcommand("parse", "Parse files and print their canonical form");
  std::vector<std::string> files;
  parse->add_option("files", files, "Domain or problem files")->required();
  format_opt(parse);

  auto* chk = app.add_subcommand("check", "Run requirement gates and semantic analysis");
  std::string domain, problem, plan;
  bool strict = false;
  chk->add_option("--domain", domain, "Domain file")->required();
  chk->add_option("--problem", problem, "Problem file");
  chk->add_flag("--strict", strict, "Treat requirement gate violations as errors");
  format_opt(chk);

  auto* val = app.add_subcommand("validate", "Validate a timed hierarchical plan");
  ValidatorOptions opts;
  std::string mode = "sum";
  val->add_option("--domain", domain, "Domain file")->required();
  val->add_option("--problem", problem, "Problem file")->required();
  val->add_option("--plan", plan, "Plan file")->required();
  val->add_option("--method-duration-mode", mode, "Default duration of durative methods")
      ->check(CLI::IsMember({"sum", "max"}));
  val->add_option("--epsilon-t", opts.eps_t, "Separation for strict orderings")
      ->check(CLI::NonNegativeNumber);
  val->add_option("--epsilon-num", opts.eps_num, "Numeric comparison tolerance")
      ->check(CLI::NonNegativeNumber);
  format_opt(val);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const bool structured = format == "structured";
  try {
    if (*parse) return run_parse(files, structured);
    if (*chk) return run_check(domain, problem, strict, structured);
    opts.mode = mode == "max" ? MethodDurationMode::Max : MethodDurationMode::Sum;
    return run_validate(domain, problem, plan, opts, structured);
  } catch (const IoError& e) {
    std::cerr << "hddl21: cannot read " << e.path << "\n";
    return 2;
  }
}
