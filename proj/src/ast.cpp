#include "hddl/ast.hpp"

namespace hddl::ast {

std::string_view to_string(CompOp op) {
  switch (op) {
    case CompOp::Lt:
      return "<";
    case CompOp::Le:
      return "<=";
    case CompOp::Eq:
      return "=";
    case CompOp::Ge:
      return ">=";
    case CompOp::Gt:
      return ">";
  }
  return "=";
}

std::string_view to_string(ArithOp op) {
  switch (op) {
    case ArithOp::Add:
      return "+";
    case ArithOp::Sub:
      return "-";
    case ArithOp::Mul:
      return "*";
    case ArithOp::Div:
      return "/";
  }
  return "+";
}

std::string_view to_string(TimeSpec t) { return t == TimeSpec::Start ? "start" : "end"; }

std::string_view to_string(AssignOp op) {
  switch (op) {
    case AssignOp::Assign:
      return "assign";
    case AssignOp::ScaleUp:
      return "scale-up";
    case AssignOp::ScaleDown:
      return "scale-down";
    case AssignOp::Increase:
      return "increase";
    case AssignOp::Decrease:
      return "decrease";
  }
  return "assign";
}

std::string_view to_string(ConstraintDef::Kind k) {
  using K = ConstraintDef::Kind;
  switch (k) {
    case K::Equal:
      return "=";
    case K::NotEqual:
      return "not-equal";
    case K::HoldBefore:
      return "hold-before";
    case K::HoldAfter:
      return "hold-after";
    case K::HoldBetween:
      return "hold-between";
    case K::HoldDuring:
      return "hold-during";
    case K::AtEnd:
      return "at-end";
    case K::AtStart:
      return "at-start";
    case K::Always:
      return "always";
    case K::AtMostOnce:
      return "at-most-once";
    case K::Sometime:
      return "sometime";
    case K::SometimeBefore:
      return "sometime-before";
    case K::SometimeAfter:
      return "sometime-after";
  }
  return "?";
}

const Symbol& structure_name(const Structure& s) {
  return std::visit([](const auto& x) -> const Symbol& { return x.name; }, s);
}

const NodeInfo& structure_info(const Structure& s) {
  return std::visit([](const auto& x) -> const NodeInfo& { return x.info; }, s);
}

}  // namespace hddl::ast
