#include "ircheck/graphs/cfg.hpp"

#include <algorithm>

namespace ircheck::graphs {

CFG build_cfg(const ir::Function& f) {
  CFG g;
  g.function = f.name;
  g.entry = f.entry_label();
  for (const auto& b : f.blocks) {
    g.nodes.push_back(b.label);
    auto& succ = g.succ[b.label];
    switch (b.terminator.kind) {
    case ir::Terminator::Kind::Ret:
      g.exits.insert(b.label);
      break;
    case ir::Terminator::Kind::Br:
    case ir::Terminator::Kind::CondBr:
      for (const auto& target : b.terminator.targets) {
        if (std::find(succ.begin(), succ.end(), target) == succ.end())
          succ.push_back(target);
        g.edges.emplace(b.label, target);
      }
      break;
    }
  }
  return g;
}

} // namespace ircheck::graphs
