// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "ast_gen.hpp"
#include "fixtures.hpp"
#include "hddl/corpus.hpp"
#include "hddl/parser.hpp"
#include "hddl/printer.hpp"
#include "hddl/requirements.hpp"
#include "hddl/temporal.hpp"
#include "hddl/validator.hpp"
#include "oracles.hpp"

namespace {

using namespace hddl;
using namespace hddl::testing;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(prec);
  s << v;
  return s.str();
}

// Time limit check appended to a criterion's own verdict.
Outcome timed(const std::function<Outcome()>& body, double limit) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = seconds_since(t0);
  o.detail += "; " + fmt(s) + "s";
  if (limit > 0 && s >= limit) {
    o.pass = false;
    o.detail += " exceeds " + fmt(limit, 0) + "s";
  }
  return o;
}

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

const Manifest& manifest() {
  static const Manifest m = corpus_manifest(corpus_dir());
  return m;
}

// 1. Every grammar production is reached by a corpus entry that passes.
Outcome grammar_coverage() {
  ProductionCoverage cov;
  std::vector<std::string> failed;
  for (const auto& e : manifest().entries) {
    ProductionCoverage one;
    EntryResult r = run_entry(manifest(), e, &one);
    if (!r.ok) {
      failed.push_back(e.id + " (" + r.detail + ")");
      continue;
    }
    cov.hit.insert(one.hit.begin(), one.hit.end());
  }
  std::vector<std::string> missing;
  for (const auto& p : grammar_productions())
    if (!cov.hit.count(p)) missing.push_back(p);
  std::size_t total = grammar_productions().size();
  Outcome o;
  o.pass = missing.empty() && failed.empty();
  o.detail = std::to_string(total - missing.size()) + "/" + std::to_string(total) +
             " productions covered by " + std::to_string(manifest().entries.size()) + " entries";
  if (!missing.empty()) o.detail += "; uncovered: " + join(missing);
  if (!failed.empty()) o.detail += "; failing entries: " + join(failed);
  return o;
}

std::vector<std::string> codes(const Diagnostics& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

// 2. The verbatim corpus fragments are clean, except the turn methods, which
// give an unbound variable and a malformed function application.
Outcome figure_fidelity() {
  FlagSet everything(all_flags().begin(), all_flags().end());
  std::vector<std::string> problems;
  for (const char* f : {"figures/fig1-calibrate.hddl", "figures/fig3-take-image.hddl",
                        "figures/fig5-method-observe.hddl"}) {
    auto r = parse_structures_text(corpus_text(f));
    Diagnostics ds = r.diagnostics;
    if (r.ast) {
      ast::Domain wrapper;
      for (const auto& s : *r.ast) {
        auto more = check_variable_scopes(s);
        ds.insert(ds.end(), more.begin(), more.end());
        wrapper.structures.push_back(s);
      }
      for (const auto& v : check_gates(wrapper, nullptr, everything))
        ds.push_back(to_diagnostic(v, true));
    }
    if (!r.ast || !ds.empty()) problems.push_back(std::string(f) + ": " + join(codes(ds)));
  }
  {
    auto r = parse_problem_sections_text(corpus_text("figures/fig2-init.hddl"));
    Diagnostics ds = r.diagnostics;
    if (r.ast)
      for (const auto& v : check_problem_gates(*r.ast, everything)) ds.push_back(to_diagnostic(v, true));
    if (!r.ast || !ds.empty()) problems.push_back("fig2: " + join(codes(ds)));
  }
  auto r = parse_structures_text(corpus_text("figures/fig4-turn-methods.hddl"));
  Diagnostics ds = r.diagnostics;
  if (r.ast)
    for (const auto& s : *r.ast) {
      auto more = check_variable_scopes(s);
      ds.insert(ds.end(), more.begin(), more.end());
    }
  const std::vector<std::string> fig4_codes = codes(ds);
  std::set<std::string> fig4(fig4_codes.begin(), fig4_codes.end());
  for (const char* want : {"unbound-variable", "malformed-function-application"})
    if (!fig4.count(want)) problems.push_back(std::string("fig4 lacks ") + want);
  Outcome o;
  o.pass = problems.empty();
  o.detail = o.pass ? "fig1, fig2, fig3, fig5 clean; fig4-turn-methods: " + join({fig4.begin(), fig4.end()})
                    : join(problems, "; ");
  return o;
}

template <class T, class Parse>
bool round_trips(const T& tree, Parse parse, std::string& why) {
  std::string text = print_canonical(tree);
  auto again = parse(text);
  if (!again.ok()) {
    why = "printed text does not parse:\n" + text;
    return false;
  }
  if (!(*again.ast == tree)) {
    why = "re-parsed tree differs:\n" + text;
    return false;
  }
  return true;
}

bool plan_equal(const TimedPlan& a, const TimedPlan& b) {
  if (a.actions.size() != b.actions.size() || a.roots != b.roots ||
      a.nodes.size() != b.nodes.size() || a.htn_bindings != b.htn_bindings)
    return false;
  for (std::size_t i = 0; i < a.actions.size(); ++i) {
    const auto &x = a.actions[i], &y = b.actions[i];
    if (x.start != y.start || x.name != y.name || x.args != y.args || x.duration != y.duration)
      return false;
  }
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const auto &x = a.nodes[i], &y = b.nodes[i];
    if (x.id != y.id || x.leaf != y.leaf || x.action != y.action || x.task != y.task ||
        x.args != y.args || x.method != y.method || x.children != y.children)
      return false;
  }
  return true;
}

// 3. parse -> print -> parse on the corpus and on random trees.
Outcome round_trip() {
  std::vector<std::string> bad, excluded;
  std::set<std::string> seen;
  int files = 0;
  // A file that does not parse cleanly has no tree to round-trip; only
  // entries expected to fail may be in that state.
  auto parsed = [&](const CorpusEntry& e, const Diagnostics& ds) {
    if (!has_errors(ds)) return true;
    if (e.expectation == "check-fails")
      excluded.push_back(e.path);
    else
      bad.push_back(e.path + ": does not parse");
    return false;
  };
  for (const auto& e : manifest().entries) {
    if (!seen.insert(e.path).second) continue;
    std::string text = corpus_text(e.path);
    std::string why;
    bool ok = true;
    ++files;
    if (e.kind == "plan") {
      TimedPlan p = load_plan(text);
      ok = plan_equal(p, load_plan(print_plan(p)));
      if (!ok) why = "plan differs";
    } else if (e.kind == "domain") {
      auto r = parse_domain_text(text);
      if (!parsed(e, r.diagnostics)) continue;
      ok = r.ast && round_trips(*r.ast, [](const std::string& t) { return parse_domain_text(t); }, why);
    } else if (e.kind == "problem") {
      auto r = parse_problem_text(text);
      if (!parsed(e, r.diagnostics)) continue;
      ok = r.ast && round_trips(*r.ast, [](const std::string& t) { return parse_problem_text(t); }, why);
    } else if (e.context.count("entry") && e.context.at("entry") == "problem-sections") {
      auto r = parse_problem_sections_text(text);
      if (!parsed(e, r.diagnostics)) continue;
      ok = r.ast.has_value();
      if (ok) {
        r.ast->name.name = "p";
        r.ast->domain.name = "d";
        ok = round_trips(*r.ast, [](const std::string& t) { return parse_problem_text(t); }, why);
      }
    } else {
      auto r = parse_structures_text(text);
      if (!parsed(e, r.diagnostics)) continue;
      ok = r.ast.has_value();
      if (ok)
        for (const auto& s : *r.ast)
          if (!round_trips(s, [](const std::string& t) { return parse_structure_text(t); }, why)) {
            ok = false;
            break;
          }
    }
    if (!ok) bad.push_back(e.path + (why.empty() ? "" : ": " + why));
  }
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    std::string why;
    if (!round_trips(random_domain(static_cast<std::uint64_t>(i)),
                     [](const std::string& t) { return parse_domain_text(t); }, why))
      bad.push_back("random domain " + std::to_string(i) + ": " + why);
    if (!round_trips(random_problem(static_cast<std::uint64_t>(i)),
                     [](const std::string& t) { return parse_problem_text(t); }, why))
      bad.push_back("random problem " + std::to_string(i) + ": " + why);
  }
  Outcome o;
  o.pass = bad.empty();
  o.detail = std::to_string(files - static_cast<int>(excluded.size())) + " corpus files, " + std::to_string(n) + " random domains, " +
             std::to_string(n) + " random problems";
  if (!excluded.empty()) o.detail += " (not parseable by design: " + join(excluded) + ")";
  if (!bad.empty())
    o.detail += "; " + std::to_string(bad.size()) + " failures, first: " + bad.front();
  return o;
}

// Implications as stated for the requirement flags, plus the ones this
// toolkit adds for flags whose features depend on others.
FlagSet oracle_closure(FlagSet s) {
  using F = RequirementFlag;
  const std::vector<std::pair<F, F>> stated = {
      {F::DurationInequalities, F::DurativeActions},
      {F::TimedInitialLiterals, F::DurativeActions},
  };
  const std::vector<std::pair<F, F>> added = {
      {F::DurativeMethods, F::DurativeActions}, {F::DurativeMethods, F::Hierarchy},
      {F::MethodConstraints, F::Hierarchy},     {F::NumericFluents, F::Fluents},
      {F::ObjectFluents, F::Fluents},           {F::ObjectFluents, F::Typing},
  };
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto* table : {&stated, &added})
      for (const auto& [from, to] : *table)
        if (s.count(from) && s.insert(to).second) grew = true;
  }
  return s;
}

// 4. Removing each temporal/numeric flag trips a gate; closure is exact.
Outcome requirement_gating() {
  using F = RequirementFlag;
  const std::set<F> eight = {F::Fluents,         F::NumericFluents,       F::ObjectFluents,
                             F::DurativeActions, F::DurativeMethods,      F::DurationInequalities,
                             F::TimedInitialLiterals, F::ContinuousEffects};
  std::set<F> tested;
  std::vector<std::string> bad;
  for (const auto& e : manifest().entries) {
    auto g = e.context.find("gates");
    if (g == e.context.end()) continue;
    EntryResult r = run_entry(manifest(), e);
    if (!r.ok) bad.push_back(e.id + ": " + r.detail);
    std::stringstream names(g->second);
    for (std::string n; std::getline(names, n, ',');)
      if (auto f = flag_from_string(n)) tested.insert(*f);
  }
  for (F f : eight)
    if (!tested.count(f)) bad.push_back(std::string("no gate test for :") + std::string(to_string(f)));

  if (closure({F::DurationInequalities}) != FlagSet{F::DurationInequalities, F::DurativeActions})
    bad.push_back("closure {duration-inequalities}");
  if (closure({F::TimedInitialLiterals}) != FlagSet{F::TimedInitialLiterals, F::DurativeActions})
    bad.push_back("closure {timed-initial-literals}");
  // Every subset of the flags.
  const auto& flags = all_flags();
  std::mt19937_64 rng(4);
  int subsets = 0;
  for (F f : flags) {
    ++subsets;
    if (closure({f}) != oracle_closure({f})) bad.push_back("closure {" + std::string(to_string(f)) + "}");
  }
  for (int i = 0; i < 2000; ++i, ++subsets) {
    FlagSet s;
    for (F f : flags)
      if (rng() % 3 == 0) s.insert(f);
    FlagSet c = closure(s);
    if (c != oracle_closure(s) || closure(c) != c) {
      bad.push_back("closure of a random set");
      break;
    }
  }
  Outcome o;
  o.pass = bad.empty();
  o.detail = std::to_string(tested.size()) + " flags gate-tested, " + std::to_string(subsets) +
             " closure sets";
  if (!bad.empty()) o.detail += "; " + join(bad, "; ");
  return o;
}

ast::Gd gd_of(const std::string& text) {
  auto r = parse_gd_text(text);
  if (!r.ok()) throw std::runtime_error("bad formula " + text);
  return *r.ast;
}

ast::Effect effect_of(const std::string& text) {
  auto r = parse_effect_text(text);
  if (!r.ok()) throw std::runtime_error("bad effect " + text);
  return *r.ast;
}

ast::ConstraintDef constraint(ast::ConstraintDef::Kind k, std::vector<std::string> tasks,
                              const ast::Gd& gd) {
  ast::ConstraintDef c;
  c.kind = k;
  for (auto& t : tasks) c.tasks.push_back(ast::Symbol{t, {}});
  c.gd = gd;
  return c;
}

const GroundAtom& atom_name(int bit) {
  static const std::vector<GroundAtom> names = {make_atom("p0", {}), make_atom("p1", {}),
                                                make_atom("p2", {})};
  return names[static_cast<std::size_t>(bit)];
}

void set_state(State& s, Mask m) {
  s.atoms.clear();
  for (int b = 0; b < 3; ++b)
    if (m & (1 << b)) s.atoms.insert(atom_name(b));
}

// 5. Exhaustive agreement with the quantifier formulae.
Outcome constraint_oracle() {
  using K = ast::ConstraintDef::Kind;
  const ast::Gd phi_gd = gd_of("(or (and (p0) (p1)) (not (p2)))");
  const Formula phi = [](Mask m) { return ((m & 1) && (m & 2)) || !(m & 4); };
  const ast::Effect body = effect_of("(and (p0) (not (p2)))");
  const Mask adds = 1, deletes = 4;

  const auto c_before = constraint(K::HoldBefore, {"a"}, phi_gd);
  const auto c_after = constraint(K::HoldAfter, {"a"}, phi_gd);
  const auto c_sbefore = constraint(K::SometimeBefore, {"a"}, phi_gd);
  const auto c_safter = constraint(K::SometimeAfter, {"a"}, phi_gd);
  const auto c_between = constraint(K::HoldBetween, {"a", "b"}, phi_gd);
  const auto c_during = constraint(K::HoldDuring, {"a", "b"}, phi_gd);
  const auto c_start = constraint(K::AtStart, {}, phi_gd);
  const auto c_always = constraint(K::Always, {}, phi_gd);
  const auto c_sometime = constraint(K::Sometime, {}, phi_gd);
  const auto c_once = constraint(K::AtMostOnce, {}, phi_gd);
  auto c_end = constraint(K::AtEnd, {}, {});
  c_end.effect = body;

  const Bindings none;
  const EvalContext ctx;
  IntervalMap intervals{{"a", {"a", 0, 0}}, {"b", {"b", 0, 0}}};
  TaskInterval& ia = intervals["a"];
  TaskInterval& ib = intervals["b"];

  std::uint64_t cases = 0;
  std::array<std::array<std::uint64_t, 2>, 13> truth{};  // per kind: false, true
  std::vector<std::string> disagreements;
  std::vector<Mask> masks;
  TimedTrajectory traj;

  auto check = [&](const ast::ConstraintDef& c, bool expected) {
    ++cases;
    bool got = holds_constraint(c, traj, intervals, none, ctx);
    truth[static_cast<std::size_t>(c.kind)][expected]++;
    if (got != expected && disagreements.size() < 5) {
      std::string s;
      for (Mask m : masks) s += std::to_string(m);
      disagreements.push_back(std::string(to_string(c.kind)) + " on " + s + " a=[" +
                              fmt(ia.start, 0) + "," + fmt(ia.end, 0) + "] b=[" + fmt(ib.start, 0) +
                              "," + fmt(ib.end, 0) + "]");
    }
  };

  for (int len = 1; len <= 6; ++len) {
    masks.assign(static_cast<std::size_t>(len), 0);
    traj.steps.assign(static_cast<std::size_t>(len), {});
    for (int i = 0; i < len; ++i) traj.steps[static_cast<std::size_t>(i)].time = i;
    std::vector<Placement> places;
    for (int s = 0; s < len; ++s)
      for (int e = s; e < len; ++e) places.push_back({s, e});
    const std::uint32_t count = 1u << (3 * len);
    for (std::uint32_t code = 0; code < count; ++code) {
      for (int i = 0; i < len; ++i) {
        masks[static_cast<std::size_t>(i)] = static_cast<Mask>((code >> (3 * i)) & 7);
        set_state(traj.steps[static_cast<std::size_t>(i)].state, masks[static_cast<std::size_t>(i)]);
      }
      check(c_start, oracle_at_start(masks, phi));
      check(c_end, oracle_at_end(masks, adds, deletes));
      check(c_always, oracle_always(masks, phi));
      check(c_sometime, oracle_sometime(masks, phi));
      check(c_once, oracle_at_most_once(masks, phi));
      for (const auto& pa : places) {
        ia.start = pa.start;
        ia.end = pa.end;
        check(c_before, oracle_hold_before(masks, pa, phi));
        check(c_after, oracle_hold_after(masks, pa, phi));
        check(c_sbefore, oracle_sometime_before(masks, pa, phi));
        check(c_safter, oracle_sometime_after(masks, pa, phi));
        for (const auto& pb : places) {
          ib.start = pb.start;
          ib.end = pb.end;
          check(c_between, oracle_hold_between(masks, pa, pb, phi));
          check(c_during, oracle_hold_during(masks, pa, pb, phi));
        }
      }
    }
  }
  std::vector<std::string> one_sided;
  std::size_t forms = 0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if (truth[k][0] + truth[k][1] == 0) continue;
    ++forms;
    if (truth[k][0] == 0 || truth[k][1] == 0)
      one_sided.emplace_back(to_string(static_cast<K>(k)));
  }
  Outcome o;
  o.pass = disagreements.empty() && cases >= 100000 && forms == 11 && one_sided.empty();
  o.detail = std::to_string(cases) + " cases over " + std::to_string(forms) +
             " forms, " + std::to_string(disagreements.size()) + " disagreements";
  if (!disagreements.empty()) o.detail += "; " + join(disagreements, "; ");
  if (!one_sided.empty()) o.detail += "; never both true and false: " + join(one_sided);
  return o;
}

std::string random_formula(std::mt19937_64& rng, int depth) {
  int r = static_cast<int>(rng() % (depth <= 0 ? 1 : 4));
  std::string a = "(p" + std::to_string(rng() % 3) + ")";
  switch (r) {
    case 0:
      return a;
    case 1:
      return "(not " + random_formula(rng, depth - 1) + ")";
    case 2:
      return "(and " + random_formula(rng, depth - 1) + " " + random_formula(rng, depth - 1) + ")";
    default:
      return "(or " + random_formula(rng, depth - 1) + " " + random_formula(rng, depth - 1) + ")";
  }
}

// 6. Rewriting equivalences and implications on random trajectories.
Outcome rewriting_theorems() {
  using K = ast::ConstraintDef::Kind;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Bindings none;
  const EvalContext ctx;
  int runs = 10000;
  std::map<std::string, int> counterexamples;
  int always_true = 0, during_checked = 0;
  for (int run = 0; run < runs; ++run) {
    TimedTrajectory traj;
    int n = 1 + static_cast<int>(rng() % 10);
    double t = std::floor(unit(rng) * 50) / 4;
    for (int i = 0; i < n; ++i) {
      TrajectoryStep st;
      if (i == 1 && rng() % 2) {
        st.time = t;
      } else if (i > 0) {
        t += 0.25 + std::floor(unit(rng) * 12) / 4;
        st.time = t;
      } else {
        st.time = t;
      }
      set_state(st.state, static_cast<Mask>(rng() % 8));
      traj.steps.push_back(st);
    }
    const double t0 = traj.steps.front().time, tn = traj.steps.back().time;
    auto pick_time = [&] { return traj.steps[rng() % traj.steps.size()].time; };
    ast::Gd phi = gd_of(random_formula(rng, 3));

    // AtStart <=> HoldBefore of a task starting at t0.
    IntervalMap iv{{"a", {"a", t0, std::max(t0, pick_time())}}};
    bool at_start = holds_constraint(constraint(K::AtStart, {}, phi), traj, iv, none, ctx);
    if (at_start != holds_constraint(constraint(K::HoldBefore, {"a"}, phi), traj, iv, none, ctx))
      ++counterexamples["at-start/hold-before"];

    // AtEnd of a literal conjunction <=> HoldAfter of a task ending at tn.
    std::string lits;
    for (int b = 0; b < 3; ++b) {
      int r = static_cast<int>(rng() % 3);
      std::string p = "(p" + std::to_string(b) + ")";
      if (r == 1) lits += " " + p;
      if (r == 2) lits += " (not " + p + ")";
    }
    if (lits.empty()) lits = " (p0)";
    auto end_c = constraint(K::AtEnd, {}, {});
    end_c.effect = effect_of("(and" + lits + ")");
    IntervalMap last{{"a", {"a", std::min(tn, pick_time()), tn}}};
    bool at_end = holds_constraint(end_c, traj, last, none, ctx);
    if (at_end != holds_constraint(constraint(K::HoldAfter, {"a"}, gd_of("(and" + lits + ")")), traj,
                                   last, none, ctx))
      ++counterexamples["at-end/hold-after"];

    // Always => Sometime, Always => AtMostOnce.
    if (holds_constraint(constraint(K::Always, {}, phi), traj, iv, none, ctx)) {
      ++always_true;
      if (!holds_constraint(constraint(K::Sometime, {}, phi), traj, iv, none, ctx))
        ++counterexamples["always/sometime"];
      if (!holds_constraint(constraint(K::AtMostOnce, {}, phi), traj, iv, none, ctx))
        ++counterexamples["always/at-most-once"];
    }

    // HoldDuring => HoldBetween when T1 ends no later than T2 starts.
    std::vector<double> pts = {pick_time(), pick_time(), pick_time(), pick_time()};
    std::sort(pts.begin(), pts.end());
    IntervalMap two{{"a", {"a", pts[0], pts[1]}}, {"b", {"b", pts[2], pts[3]}}};
    ++during_checked;
    if (holds_constraint(constraint(K::HoldDuring, {"a", "b"}, phi), traj, two, none, ctx) &&
        !holds_constraint(constraint(K::HoldBetween, {"a", "b"}, phi), traj, two, none, ctx))
      ++counterexamples["hold-during/hold-between"];
  }
  Outcome o;
  o.pass = counterexamples.empty() && always_true > 0;
  o.detail = std::to_string(runs) + " trajectories (" + std::to_string(always_true) +
             " with always true, " + std::to_string(during_checked) + " during/between pairs), ";
  if (counterexamples.empty()) {
    o.detail += "0 counterexamples";
  } else {
    std::vector<std::string> parts;
    for (const auto& [k, n] : counterexamples) parts.push_back(k + "=" + std::to_string(n));
    o.detail += "counterexamples: " + join(parts);
  }
  return o;
}

// 7. The EOS golden plan and its mutants.
Outcome eos_end_to_end() {
  const std::set<std::string> required = {
      "plan-straddle-window",  "plan-take-image-duration",   "plan-task1-before-power",
      "plan-task0-after-task2", "plan-method-duration-bound", "plan-missing-leaf",
      "plan-simultaneous-effects", "plan-sum-mismatch"};
  std::vector<std::string> bad;
  int mutants = 0;
  bool golden = false;
  std::set<std::string> present;
  for (const auto& e : manifest().entries) {
    if (e.kind != "plan") continue;
    present.insert(e.id);
    EntryResult r = run_entry(manifest(), e);
    if (!r.ok) bad.push_back(e.id + ": " + r.detail);
    if (e.id == "plan-golden") golden = r.ok;
    if (e.expectation == "invalid" && r.ok) ++mutants;
  }
  for (const auto& id : required)
    if (!present.count(id)) bad.push_back("missing mutant " + id);
  Outcome o;
  o.pass = golden && mutants >= 8 && bad.empty();
  o.detail = std::string("golden ") + (golden ? "valid" : "NOT valid") + ", " +
             std::to_string(mutants) + " mutants fail with the expected kind";
  if (!bad.empty()) o.detail += "; " + join(bad, "; ");
  return o;
}

// 8. turn_approx with turn-time 8 accepts exactly [4, 10].
Outcome duration_arithmetic() {
  auto d = parse_domain_text(corpus_text("eos/domain.hddl"));
  if (!d.ok()) return {false, "EOS domain does not parse"};
  const ast::DurationConstraint* c = nullptr;
  for (const auto& s : d.ast->structures)
    if (auto m = std::get_if<ast::DurativeMethod>(&s); m && m->name.name == "turn_approx")
      c = m->duration ? &*m->duration : nullptr;
  if (!c) return {false, "turn_approx has no duration"};

  const double eps = 1e-6;
  State st;
  st.fluents[make_atom("turn-time", {"site", "star0"})] = 8;
  const Bindings b = {{"?ta_d", "site"}, {"?ta_d_prev", "star0"}};
  DurationInterval oracle =
      duration_interval(*c, {{"turn-time site star0", Rational(8)}}, {b.begin(), b.end()});
  EvalContext ctx;
  ctx.eps_num = eps;
  auto accepts = [&](double dur) {
    return check_method_duration(*c, TaskInterval{"turn_to", 100, 100 + dur}, {}, st, b, ctx);
  };

  std::vector<std::string> bad;
  if (!oracle.lo || !oracle.hi || oracle.lo->value != 4 || oracle.hi->value != 10 ||
      oracle.lo->strict || oracle.hi->strict)
    bad.push_back("oracle interval is not [4, 10]");
  for (auto [dur, want] : std::vector<std::pair<double, bool>>{
           {4.0, true}, {10.0, true}, {3.999, false}, {10.001, false}})
    if (accepts(dur) != want)
      bad.push_back(fmt(dur, 3) + (want ? " rejected" : " accepted"));
  std::vector<double> probes;
  for (int k = 0; k <= 15000; ++k) probes.push_back(k / 1000.0);
  for (double edge : {4.0, 10.0})
    for (double off : {-1e-3, -2e-6, -1e-6, -5e-7, 0.0, 5e-7, 1e-6, 2e-6, 1e-3})
      probes.push_back(edge + off);
  int agree = 0;
  for (double p : probes) {
    if (accepts(p) == oracle.contains(p, eps))
      ++agree;
    else if (bad.size() < 5)
      bad.push_back("disagreement at " + fmt(p, 7));
  }
  Outcome o;
  o.pass = bad.empty();
  o.detail = "4 and 10 accepted, 3.999 and 10.001 rejected; " + std::to_string(agree) + "/" +
             std::to_string(probes.size()) + " probes agree with the interval oracle";
  if (!bad.empty()) o.detail = join(bad, "; ");
  return o;
}

std::string shift_plan(const TimedPlan& p, double delta) {
  TimedPlan q = p;
  for (auto& a : q.actions) a.start += delta;
  return print_plan(q);
}

// 9. Byte-identical repeated runs; verdicts survive a time shift.
Outcome determinism_and_shift() {
  std::vector<std::string> bad;
  const std::string dom = (corpus_dir() / "eos/domain.hddl").string();
  const std::string prob = (corpus_dir() / "eos/problem.hddl").string();
  int compared = 0;
  for (const char* plan : {"golden", "straddle-window", "missing-leaf", "simultaneous-effects"}) {
    const std::string path = (corpus_dir() / "eos/plans" / (std::string(plan) + ".plan")).string();
    for (const char* format : {"text", "structured"}) {
      std::vector<std::string> outs;
      for (int i = 0; i < 3; ++i)
        outs.push_back(run_cli({"validate", "--domain", dom, "--problem", prob, "--plan", path,
                                "--format", format})
                           .out);
      ++compared;
      if (outs[0].empty() || outs[0] != outs[1] || outs[1] != outs[2])
        bad.push_back(std::string(plan) + " " + format + " output differs between runs");
    }
  }

  const double delta = 37.5;
  auto d = parse_domain_text(corpus_text("eos/domain.hddl"));
  auto p = parse_problem_text(corpus_text("eos/problem.hddl"));
  ast::Problem shifted = *p.ast;
  int tils = 0;
  for (auto& e : shifted.init)
    if (e.kind == ast::InitElement::Kind::Timed) {
      e.time.value += delta;
      e.time.text.clear();
      ++tils;
    }
  auto base = analyze(*d.ast, *p.ast);
  auto moved = analyze(*d.ast, shifted);
  if (!base.model || !moved.model) return {false, "EOS model does not analyse"};
  int plans = 0;
  for (const auto& e : manifest().entries) {
    if (e.kind != "plan") continue;
    ValidatorOptions vo;
    if (e.context.count("mode") && e.context.at("mode") == "max") vo.mode = MethodDurationMode::Max;
    TimedPlan plan = load_plan(corpus_text(e.path));
    auto r0 = validate(*base.model, plan, vo);
    auto r1 = validate(*moved.model, load_plan(shift_plan(plan, delta)), vo);
    std::vector<std::string> k0, k1;
    for (const auto& f : r0.failures) k0.emplace_back(to_string(f.kind));
    for (const auto& f : r1.failures) k1.emplace_back(to_string(f.kind));
    ++plans;
    if (r0.valid != r1.valid || k0 != k1)
      bad.push_back(e.id + " changes under the shift: [" + join(k0) + "] vs [" + join(k1) + "]");
    if (e.id == "plan-golden" && !r1.valid) bad.push_back("shifted golden plan is not valid");
  }
  Outcome o;
  o.pass = bad.empty() && tils > 0;
  o.detail = std::to_string(compared) + " outputs identical over 3 runs; " +
             std::to_string(plans) + " verdicts unchanged under +37.5 (" + std::to_string(tils) +
             " timed literals shifted)";
  if (!bad.empty()) o.detail = join(bad, "; ");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit;
  };
  const std::vector<Criterion> criteria = {
      {1, "grammar coverage", grammar_coverage, 5},
      {2, "figure fidelity", figure_fidelity, 1},
      {3, "round-trip", round_trip, 10},
      {4, "requirement gating", requirement_gating, 0},
      {5, "constraint semantics oracle", constraint_oracle, 60},
      {6, "rewriting theorems", rewriting_theorems, 0},
      {7, "EOS end-to-end", eos_end_to_end, 5},
      {8, "duration arithmetic", duration_arithmetic, 0},
      {9, "determinism and shift invariance", determinism_and_shift, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o = timed(c.run, c.limit);
    if (!o.pass) ++failed;
    std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.pass ? "PASS" : "FAIL")
              << " - " << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
