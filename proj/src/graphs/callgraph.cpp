#include "ircheck/graphs/callgraph.hpp"

#include <deque>
#include <sstream>

#include "ircheck/errors.hpp"

namespace ircheck::graphs {

CallGraph build_callgraph(const pts::PointsToState& s) {
  CallGraph g;
  for (const auto& f : s.module().functions)
    g.nodes.insert(f.name);
  for (const auto& d : s.module().declarations)
    g.nodes.insert(d.name);
  for (const auto& e : s.call_edges()) {
    const auto& site = s.constraints().call_sites[e.site];
    CallGraph::Edge edge;
    edge.caller = e.caller;
    edge.site = {site.caller, site.loc.block, site.loc.index};
    edge.callee = e.callee;
    edge.call_string = s.contexts().call_string(e.ctx);
    g.edges.push_back(std::move(edge));
    g.erased[e.caller].insert(e.callee);
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::set<std::string> reachable_functions(const CallGraph& g, const std::string& root) {
  if (!g.nodes.count(root))
    throw RootNotFoundError(root);
  std::set<std::string> seen{root};
  std::deque<std::string> queue{root};
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    auto it = g.erased.find(cur);
    if (it == g.erased.end())
      continue;
    for (const auto& callee : it->second)
      if (seen.insert(callee).second)
        queue.push_back(callee);
  }
  return seen;
}

std::string to_dot(const CallGraph& g) {
  std::ostringstream os;
  os << "digraph callgraph {\n";
  for (const auto& n : g.nodes)
    os << "  \"" << n << "\";\n";
  for (const auto& [caller, callees] : g.erased)
    for (const auto& callee : callees)
      os << "  \"" << caller << "\" -> \"" << callee << "\";\n";
  os << "}\n";
  return os.str();
}

} // namespace ircheck::graphs
