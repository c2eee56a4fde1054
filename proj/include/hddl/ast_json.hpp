#pragma once

#include <json.hpp>

#include "hddl/ast.hpp"

namespace hddl {

// Structured AST dump. Every node object carries a "kind" and a "span"
// ([start-line, start-col, end-line, end-col]).
nlohmann::json to_json(const ast::Domain& d);
nlohmann::json to_json(const ast::Problem& p);
nlohmann::json to_json(const ast::Structure& s);

}  // namespace hddl
