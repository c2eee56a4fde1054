#include "hddl/plan.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace hddl {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> number(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(lower(w));
  return out;
}

class PlanReader {
 public:
  PlanReader(std::string_view text, FileId file) : text_(text), file_(file) {}

  PlanParseResult run() {
    TimedPlan plan;
    std::size_t pos = 0;
    std::uint32_t line_no = 0;
    bool decomposition = false;
    while (pos <= text_.size()) {
      std::size_t nl = text_.find('\n', pos);
      if (nl == std::string_view::npos) nl = text_.size();
      std::string_view raw = text_.substr(pos, nl - pos);
      line_begin_ = pos;
      ++line_no;
      line_ = line_no;
      pos = nl + 1;
      std::string_view body = raw.substr(0, raw.find(';'));
      body = trim(body);
      if (body.empty()) continue;
      if (body == "==>") {
        if (decomposition) error(raw, "second '==>' separator");
        decomposition = true;
        plan.has_decomposition = true;
        continue;
      }
      if (!decomposition)
        action_line(body, raw, plan);
      else
        decomposition_line(body, raw, plan);
    }
    if (plan.has_decomposition && plan.roots.empty())
      error({}, "decomposition section without a 'root' line");
    PlanParseResult r;
    r.diagnostics = std::move(diags_);
    if (!has_errors(r.diagnostics)) r.plan = std::move(plan);
    return r;
  }

 private:
  void error(std::string_view raw, std::string message) {
    SourceSpan s;
    s.file = file_;
    s.start_line = s.end_line = line_;
    s.start_col = 1;
    s.end_col = static_cast<std::uint32_t>(raw.size() + 1);
    s.begin = line_begin_;
    s.end = line_begin_ + raw.size();
    diags_.push_back({Severity::Error, s, "plan-syntax", std::move(message), "plan"});
  }

  void action_line(std::string_view body, std::string_view raw, TimedPlan& plan) {
    std::size_t colon = body.find(':');
    std::size_t open = body.find('(');
    std::size_t close = body.find(')');
    if (colon == std::string_view::npos || open == std::string_view::npos ||
        close == std::string_view::npos || !(colon < open && open < close)) {
      error(raw, "expected 'time: (action args) [duration]'");
      return;
    }
    PlanAction a;
    a.line = line_;
    auto start = number(body.substr(0, colon));
    if (!start || *start < 0) {
      error(raw, "expected a non-negative start time before ':'");
      return;
    }
    a.start = *start;
    auto w = words(body.substr(open + 1, close - open - 1));
    if (w.empty()) {
      error(raw, "missing action name");
      return;
    }
    a.name = w.front();
    a.args.assign(w.begin() + 1, w.end());
    std::string_view rest = trim(body.substr(close + 1));
    if (!rest.empty()) {
      if (rest.front() != '[' || rest.back() != ']') {
        error(raw, "expected '[duration]' after the action");
        return;
      }
      auto d = number(rest.substr(1, rest.size() - 2));
      if (!d || *d < 0) {
        error(raw, "duration must be a non-negative number");
        return;
      }
      a.duration = *d;
    }
    plan.actions.push_back(std::move(a));
  }

  void decomposition_line(std::string_view body, std::string_view raw, TimedPlan& plan) {
    auto w = words(body);
    if (w.front() == "root") {
      if (!plan.roots.empty()) error(raw, "more than one 'root' line");
      plan.roots.assign(w.begin() + 1, w.end());
      return;
    }
    if (w.front() == "bind") {
      if (w.size() != 3 || w[1].empty() || w[1][0] != '?') {
        error(raw, "expected 'bind ?variable object'");
        return;
      }
      plan.htn_bindings[w[1]] = w[2];
      return;
    }
    std::size_t colon = body.find(':');
    if (colon == std::string_view::npos) {
      error(raw, "expected 'id: ...'");
      return;
    }
    DecompositionNode n;
    n.line = line_;
    n.id = lower(std::string(trim(body.substr(0, colon))));
    std::string_view rest = trim(body.substr(colon + 1));
    if (n.id.empty() || n.id.find_first_of(" \t") != std::string::npos) {
      error(raw, "malformed node id");
      return;
    }
    if (!rest.empty() && rest.front() != '(') {
      auto lw = words(rest);
      std::size_t k = 0;
      if (lw.size() != 2 || lw[0] != "action" || !parse_index(lw[1], k)) {
        error(raw, "expected 'id: action <index>'");
        return;
      }
      n.leaf = true;
      n.action = k;
    } else {
      std::size_t close = rest.find(')');
      std::size_t arrow = rest.find("->");
      if (close == std::string_view::npos || arrow == std::string_view::npos || arrow < close) {
        error(raw, "expected 'id: (task args) -> method children'");
        return;
      }
      auto tw = words(rest.substr(1, close - 1));
      auto mw = words(rest.substr(arrow + 2));
      if (tw.empty() || mw.empty() || !trim(rest.substr(close + 1, arrow - close - 1)).empty()) {
        error(raw, "expected 'id: (task args) -> method children'");
        return;
      }
      n.task = tw.front();
      n.args.assign(tw.begin() + 1, tw.end());
      n.method = mw.front();
      n.children.assign(mw.begin() + 1, mw.end());
    }
    if (plan.node_index.count(n.id)) {
      error(raw, "duplicate node id " + n.id);
      return;
    }
    plan.node_index[n.id] = plan.nodes.size();
    plan.nodes.push_back(std::move(n));
  }

  static bool parse_index(const std::string& s, std::size_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  }

  std::string_view text_;
  FileId file_;
  std::uint32_t line_ = 0;
  std::size_t line_begin_ = 0;
  Diagnostics diags_;
};

}  // namespace

const DecompositionNode* TimedPlan::node(const std::string& id) const {
  auto it = node_index.find(id);
  return it == node_index.end() ? nullptr : &nodes[it->second];
}

PlanParseResult parse_plan(std::string_view text, FileId file) {
  return PlanReader(text, file).run();
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string print_plan(const TimedPlan& plan) {
  std::string out;
  for (const auto& a : plan.actions) {
    out += format_number(a.start) + ": (" + a.name;
    for (const auto& x : a.args) out += " " + x;
    out += ")";
    if (a.duration) out += " [" + format_number(*a.duration) + "]";
    out += "\n";
  }
  if (!plan.has_decomposition) return out;
  out += "==>\nroot";
  for (const auto& r : plan.roots) out += " " + r;
  out += "\n";
  for (const auto& [v, o] : plan.htn_bindings) out += "bind " + v + " " + o + "\n";
  for (const auto& n : plan.nodes) {
    out += n.id + ": ";
    if (n.leaf) {
      out += "action " + std::to_string(n.action) + "\n";
      continue;
    }
    out += "(" + n.task;
    for (const auto& x : n.args) out += " " + x;
    out += ") -> " + n.method;
    for (const auto& c : n.children) out += " " + c;
    out += "\n";
  }
  return out;
}

}  // namespace hddl
