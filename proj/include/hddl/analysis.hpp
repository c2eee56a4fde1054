#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hddl/ast.hpp"
#include "hddl/source.hpp"

namespace hddl {

/// Set of primitive types; `either` expands to several.
using TypeSet = std::set<std::string>;

struct FunctionSignature {
  std::vector<TypeSet> params;
  bool numeric = true;
  TypeSet result;  // object-valued functions only
};

struct SymbolTable {
  /// type -> parent; "object" is the root and maps to itself.
  std::map<std::string, std::string> types;
  std::map<std::string, std::vector<TypeSet>> predicates;
  std::map<std::string, FunctionSignature> functions;
  /// Abstract tasks declared with (:task ...).
  std::map<std::string, std::vector<TypeSet>> tasks;
  /// Primitive tasks: actions and durative actions.
  std::map<std::string, std::vector<TypeSet>> actions;
  /// Constants and problem objects.
  std::map<std::string, TypeSet> objects;
  bool typing = false;

  bool is_subtype(const std::string& sub, const std::string& super) const;
  /// True when every member of `actual` is a subtype of some member of `expected`.
  bool compatible(const TypeSet& actual, const TypeSet& expected) const;
  /// Objects whose type is compatible with `type`, in name order.
  std::vector<std::string> objects_of(const TypeSet& type) const;
  TypeSet expand(const std::optional<ast::Type>& t) const;
};

SymbolTable build_symbols(const ast::Domain& domain, const ast::Problem* problem,
                          Diagnostics& diags);

/// Scoping, arity and typing checks over every structure of the domain.
Diagnostics check_domain(const ast::Domain& domain, const SymbolTable& symbols);
Diagnostics check_problem(const ast::Problem& problem, const SymbolTable& symbols);

/// Variable scoping alone, usable on fragments without declarations.
Diagnostics check_variable_scopes(const ast::Structure& s);

/// Reports ordering sets that no assignment of time points can satisfy.
Diagnostics check_network_consistency(const ast::TaskNetwork& network);

/// A difference-constraint edge u -> v meaning point[u] <= point[v], or
/// point[u] < point[v] when strict. Points 2i and 2i+1 are the start and end
/// of subtask i.
struct PointEdge {
  int from;
  int to;
  bool strict;
  std::size_t ordering;  // index into orderings, or npos for axioms
};

/// Point graph of a network, including the start <= end axioms.
std::vector<PointEdge> point_graph(const ast::TaskNetwork& network);

/// Domain, problem and symbol table plus lookup indices, built once the
/// input passes analysis.
struct Model {
  ast::Domain domain;
  ast::Problem problem;
  SymbolTable symbols;
  std::map<std::string, std::size_t> structure_by_name;
  std::map<std::string, std::vector<std::size_t>> methods_by_task;

  const ast::Structure* structure(const std::string& name) const;
};

struct AnalysisResult {
  std::optional<Model> model;
  Diagnostics diagnostics;
};

/// Runs symbol building and all checks; a model is returned when no error
/// was found.
AnalysisResult analyze(ast::Domain domain, ast::Problem problem);

}  // namespace hddl
