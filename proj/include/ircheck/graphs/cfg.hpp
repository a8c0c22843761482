#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ircheck/ir/module.hpp"

namespace ircheck::graphs {

/// Intraprocedural control-flow graph: block labels plus terminator edges.
struct CFG {
  std::string function;
  std::vector<std::string> nodes; // in block order
  std::set<std::pair<std::string, std::string>> edges;
  std::string entry;
  std::set<std::string> exits; // blocks ending in ret

  /// Successors in terminator order (deterministic, duplicates removed).
  std::map<std::string, std::vector<std::string>> succ;

  const std::vector<std::string>& successors(const std::string& label) const {
    static const std::vector<std::string> none;
    auto it = succ.find(label);
    return it == succ.end() ? none : it->second;
  }
};

CFG build_cfg(const ir::Function& f);

} // namespace ircheck::graphs
