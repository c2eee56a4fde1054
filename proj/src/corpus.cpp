#include "hddl/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hddl/analysis.hpp"
#include "hddl/requirements.hpp"

namespace hddl {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t k = s.find(sep, pos);
    out.emplace_back(s.substr(pos, k == std::string_view::npos ? s.npos : k - pos));
    if (k == std::string_view::npos) return out;
    pos = k + 1;
  }
}

struct Loaded {
  std::optional<ast::Domain> domain;
  std::optional<ast::Problem> problem;
  Diagnostics diags;
};

std::string codes_of(const Diagnostics& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += ", ";
    out += d.code;
  }
  return out.empty() ? "none" : out;
}

std::string first_error(const Diagnostics& ds) {
  for (const auto& d : ds)
    if (d.severity == Severity::Error)
      return std::to_string(d.span.start_line) + ":" + std::to_string(d.span.start_col) + " " +
             d.code + ": " + d.message;
  return "";
}

class Runner {
 public:
  Runner(const Manifest& m, ProductionCoverage* cov) : m_(m) { opts_.coverage = cov; }

  EntryResult run(const CorpusEntry& e) {
    try {
      if (e.kind == "plan") return plan(e);
      if (e.kind == "snippet") return snippet(e);
      if (e.kind == "domain" || e.kind == "problem") return model_entry(e);
      return {false, "unknown kind " + e.kind};
    } catch (const std::exception& ex) {
      return {false, ex.what()};
    }
  }

 private:
  std::string text(const CorpusEntry& e) { return read_text_file(m_.root / e.path); }

  const CorpusEntry& companion(const CorpusEntry& e, const std::string& key) {
    auto it = e.context.find(key);
    if (it == e.context.end()) throw std::runtime_error(e.id + ": no " + key + "= in context");
    const CorpusEntry* c = m_.find(it->second);
    if (!c) throw std::runtime_error(e.id + ": unknown entry " + it->second);
    return *c;
  }

  // Parses the domain (and problem) an entry needs.
  Loaded load(const CorpusEntry& e) {
    Loaded l;
    const CorpusEntry& d = e.kind == "domain" ? e : companion(e, "domain");
    auto dr = parse_domain_text(text(d), 0, opts_);
    l.diags = dr.diagnostics;
    l.domain = std::move(dr.ast);
    if (e.kind == "problem" || e.kind == "plan") {
      const CorpusEntry& p = e.kind == "problem" ? e : companion(e, "problem");
      auto pr = parse_problem_text(text(p), 1, opts_);
      l.diags.insert(l.diags.end(), pr.diagnostics.begin(), pr.diagnostics.end());
      l.problem = std::move(pr.ast);
    }
    return l;
  }

  // Gate and analysis diagnostics for what was parsed.
  Diagnostics check(const Loaded& l) {
    Diagnostics ds;
    if (!l.domain) return ds;
    const ast::Problem* p = l.problem ? &*l.problem : nullptr;
    for (const auto& v : check_gates(*l.domain, p)) ds.push_back(to_diagnostic(v, false));
    if (p) {
      auto r = analyze(*l.domain, *p);
      ds.insert(ds.end(), r.diagnostics.begin(), r.diagnostics.end());
    } else {
      Diagnostics st_diags;
      SymbolTable st = build_symbols(*l.domain, nullptr, st_diags);
      ds.insert(ds.end(), st_diags.begin(), st_diags.end());
      if (!has_errors(st_diags)) {
        auto more = check_domain(*l.domain, st);
        ds.insert(ds.end(), more.begin(), more.end());
      }
    }
    return ds;
  }

  EntryResult expect(const CorpusEntry& e, const Diagnostics& all) {
    if (e.expectation == "parses" || e.expectation == "check-passes") {
      if (has_errors(all)) return {false, "unexpected error " + first_error(all)};
      return {true, ""};
    }
    if (e.expectation == "check-fails") {
      for (const auto& code : e.codes)
        if (std::none_of(all.begin(), all.end(), [&](const Diagnostic& d) {
              return d.code == code && d.severity == Severity::Error;
            }))
          return {false, "expected " + code + ", got " + codes_of(all)};
      return {true, ""};
    }
    return {false, "expectation " + e.expectation + " does not apply to " + e.kind};
  }

  EntryResult model_entry(const CorpusEntry& e) {
    Loaded l = load(e);
    Diagnostics all = l.diags;
    if (e.expectation != "parses") {
      Diagnostics more = check(l);
      all.insert(all.end(), more.begin(), more.end());
    }
    EntryResult r = expect(e, all);
    if (!r.ok) return r;
    auto g = e.context.find("gates");
    if (g == e.context.end()) return r;
    for (const auto& name : split(g->second, ',')) {
      auto flag = flag_from_string(name);
      if (!flag) return {false, "unknown flag " + name};
      Loaded cut = l;
      auto& reqs = e.kind == "problem" ? cut.problem->requirements : cut.domain->requirements;
      if (!reqs) return {false, "no requirements to remove " + name + " from"};
      auto before = reqs->size();
      std::erase_if(*reqs, [&](const ast::Symbol& s) { return flag_from_string(s.name) == flag; });
      if (reqs->size() == before) return {false, name + " is not declared"};
      auto vs = check_gates(*cut.domain, cut.problem ? &*cut.problem : nullptr);
      if (std::none_of(vs.begin(), vs.end(),
                       [&](const GateViolation& v) { return v.required_flag == *flag; }))
        return {false, "removing :" + name + " gave no gate violation naming it"};
    }
    return r;
  }

  EntryResult snippet(const CorpusEntry& e) {
    auto it = e.context.find("entry");
    std::string entry = it == e.context.end() ? "structures" : it->second;
    Diagnostics all;
    if (entry == "structures") {
      auto r = parse_structures_text(text(e), 0, opts_);
      all = r.diagnostics;
      if (r.ast && e.expectation != "parses")
        for (const auto& s : *r.ast) {
          auto more = check_variable_scopes(s);
          all.insert(all.end(), more.begin(), more.end());
        }
    } else if (entry == "problem-sections") {
      all = parse_problem_sections_text(text(e), 0, opts_).diagnostics;
    } else {
      return {false, "unknown snippet entry " + entry};
    }
    return expect(e, all);
  }

  EntryResult plan(const CorpusEntry& e) {
    Loaded l = load(e);
    if (has_errors(l.diags) || !l.domain || !l.problem)
      return {false, "model does not parse: " + first_error(l.diags)};
    auto ar = analyze(*l.domain, *l.problem);
    if (!ar.model) return {false, "model does not check: " + first_error(ar.diagnostics)};
    auto pr = parse_plan(text(e));
    if (!pr.plan) return {false, "plan does not parse: " + first_error(pr.diagnostics)};
    ValidatorOptions vo;
    auto mode = e.context.find("mode");
    if (mode != e.context.end() && mode->second == "max") vo.mode = MethodDurationMode::Max;
    ValidationReport rep = validate(*ar.model, *pr.plan, vo);
    std::string kinds;
    for (const auto& f : rep.failures) kinds += std::string(kinds.empty() ? "" : ", ") +
                                               std::string(to_string(f.kind));
    if (e.expectation == "valid")
      return {rep.valid, rep.valid ? "" : "expected valid, got " + kinds};
    if (e.expectation == "invalid") {
      if (rep.valid) return {false, "expected " + e.codes.at(0) + ", plan is valid"};
      for (const auto& f : rep.failures)
        if (to_string(f.kind) != e.codes.at(0))
          return {false, "expected only " + e.codes.at(0) + ", got " + kinds};
      return {true, ""};
    }
    return {false, "expectation " + e.expectation + " does not apply to a plan"};
  }

  const Manifest& m_;
  ParseOptions opts_;
};

}  // namespace

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const CorpusEntry* Manifest::find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

std::vector<CorpusEntry> read_manifest(std::string_view text) {
  std::vector<CorpusEntry> out;
  std::uint32_t line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line, '\t');
    if (f.size() != 6)
      throw std::runtime_error("manifest line " + std::to_string(line_no) + ": expected 6 fields");
    CorpusEntry e;
    e.line = line_no;
    e.id = f[0];
    e.kind = f[1];
    e.path = f[2];
    e.provenance = f[5];
    std::string ex = f[3];
    if (auto open = ex.find('('); open != std::string::npos) {
      if (ex.back() != ')')
        throw std::runtime_error("manifest line " + std::to_string(line_no) + ": bad expectation");
      e.codes = split(ex.substr(open + 1, ex.size() - open - 2), ',');
      ex = ex.substr(0, open);
    }
    e.expectation = ex;
    if (f[4] != "-")
      for (const auto& kv : split(f[4], ';')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw std::runtime_error("manifest line " + std::to_string(line_no) + ": bad context");
        e.context[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
    out.push_back(std::move(e));
  }
  return out;
}

Manifest corpus_manifest(const std::filesystem::path& dir) {
  Manifest m;
  m.root = dir;
  m.entries = read_manifest(read_text_file(dir / "manifest.tsv"));
  return m;
}

EntryResult run_entry(const Manifest& m, const CorpusEntry& e, ProductionCoverage* coverage) {
  return Runner(m, coverage).run(e);
}

}  // namespace hddl
