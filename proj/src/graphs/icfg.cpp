#include "ircheck/graphs/icfg.hpp"

#include <deque>
#include <sstream>

namespace ircheck::graphs {

std::map<std::pair<std::string, std::string>, std::set<pts::CallSiteKey>>
ICFG::return_bindings() const {
  std::map<std::pair<std::string, std::string>, std::set<pts::CallSiteKey>> out;
  for (const auto& [site, callees] : call_bindings)
    for (const auto& [callee, entry_label] : callees) {
      (void)entry_label;
      auto it = functions.find(callee);
      if (it == functions.end())
        continue;
      for (const auto& exit : it->second.cfg.exits)
        out[{callee, exit}].insert(site);
    }
  return out;
}

ICFG build_icfg(const ir::Module& m, const pts::PointsToState& s, const IcfgOptions& opts) {
  ICFG g;
  g.entry = s.entry();
  g.terminating_externals.insert(opts.terminating_externals.begin(),
                                 opts.terminating_externals.end());

  // reachable defined functions, entry plus any extra roots
  std::map<std::string, std::set<std::string>> erased;
  for (const auto& e : s.call_edges())
    erased[e.caller].insert(e.callee);
  std::set<std::string> reach;
  std::deque<std::string> queue;
  auto add_root = [&](const std::string& name) {
    if (m.find_function(name) && reach.insert(name).second)
      queue.push_back(name);
  };
  add_root(g.entry);
  for (const auto& r : opts.extra_roots)
    add_root(r);
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (const auto& callee : erased[cur])
      if (m.find_function(callee) && reach.insert(callee).second)
        queue.push_back(callee);
  }

  for (const auto& fname : reach) {
    const ir::Function* f = m.find_function(fname);
    IcfgFunction node;
    node.name = fname;
    node.file = f->source_file;
    node.cfg = build_cfg(*f);
    for (const auto& b : f->blocks) {
      auto& calls = node.calls[b.label];
      for (const auto& in : b.instructions) {
        if (in.kind != ir::InstrKind::CallDirect && in.kind != ir::InstrKind::CallIndirect)
          continue;
        IcfgCall call;
        call.loc = in.loc;
        call.line = in.line;
        call.direct = in.kind == ir::InstrKind::CallDirect;
        if (in.operands.size() > 1) {
          const auto& a0 = in.operands[1];
          call.nonzero_exit_arg = a0.kind == ir::ValueKind::ConstInt && a0.value != 0;
        }
        pts::CallSiteKey key{fname, in.loc.block, in.loc.index};
        for (const auto& target : s.resolved_targets_erased(key)) {
          IcfgTarget t;
          t.name = target;
          t.defined = m.find_function(target) != nullptr;
          t.terminating = !t.defined && g.terminating_externals.count(target) > 0;
          g.call_bindings[key].insert(
              {target, t.defined ? m.find_function(target)->entry_label()
                                 : std::string("<external>")});
          call.targets.push_back(std::move(t));
        }
        std::sort(call.targets.begin(), call.targets.end());
        calls.push_back(std::move(call));
      }
    }
    g.functions.emplace(fname, std::move(node));
  }
  return g;
}

std::string to_dot(const ICFG& g) {
  std::ostringstream os;
  os << "digraph icfg {\n";
  for (const auto& [fname, f] : g.functions) {
    os << "  subgraph \"cluster_" << fname << "\" {\n";
    os << "    label=\"" << fname << "\";\n";
    for (const auto& b : f.cfg.nodes)
      os << "    \"" << fname << ":" << b << "\";\n";
    for (const auto& [from, to] : f.cfg.edges)
      os << "    \"" << fname << ":" << from << "\" -> \"" << fname << ":" << to << "\";\n";
    os << "  }\n";
  }
  for (const auto& [site, callees] : g.call_bindings)
    for (const auto& [callee, entry] : callees) {
      os << "  \"" << site.function << ":" << site.block << "\" -> \"" << callee << ":"
         << entry << "\" [style=dashed,label=\"call@" << site.index << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

} // namespace ircheck::graphs
