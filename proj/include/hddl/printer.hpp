#pragma once

#include <string>

#include "hddl/ast.hpp"

namespace hddl {

// Canonical HDDL text. Output is deterministic and re-parses to a
// structurally equal tree. Numbers keep their source spelling.
std::string print_canonical(const ast::Domain& d);
std::string print_canonical(const ast::Problem& p);
std::string print_canonical(const ast::Structure& s);

// Single-line renderings of expression nodes.
std::string to_text(const ast::Gd& g);
std::string to_text(const ast::FExp& e);
std::string to_text(const ast::Effect& e);
std::string to_text(const ast::DaGd& g);
std::string to_text(const ast::DaEffect& e);
std::string to_text(const ast::AtomicFormula& a);
std::string to_text(const ast::TaskApp& t);
std::string to_text(const ast::OrderingDef& o);
std::string to_text(const ast::ConstraintDef& c);
std::string to_text(const ast::DurationConstraint& c);
std::string to_text(const ast::TypedList& l);
std::string to_text(const ast::Number& n);

}  // namespace hddl
