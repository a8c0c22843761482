#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ircheck/pts/solver.hpp"

namespace ircheck::graphs {

/// May-call graph. Per-context edges are retained; rule checking uses the
/// context-erased view.
struct CallGraph {
  std::set<std::string> nodes; // defined + declared functions

  struct Edge {
    std::string caller;
    pts::CallSiteKey site;
    std::string callee;
    std::vector<int> call_string; // caller-side context

    bool operator<(const Edge& o) const {
      return std::tie(caller, site, callee, call_string) <
             std::tie(o.caller, o.site, o.callee, o.call_string);
    }
  };

  std::vector<Edge> edges;

  /// Context-erased caller -> callees view.
  std::map<std::string, std::set<std::string>> erased;

  bool has_edge(const std::string& caller, const std::string& callee) const {
    auto it = erased.find(caller);
    return it != erased.end() && it->second.count(callee) > 0;
  }
};

CallGraph build_callgraph(const pts::PointsToState& s);

/// Functions reachable from root over the context-erased view, root included.
/// Throws RootNotFoundError if root is not a node.
std::set<std::string> reachable_functions(const CallGraph& g, const std::string& root);

/// GraphViz rendering for debugging (context-erased).
std::string to_dot(const CallGraph& g);

} // namespace ircheck::graphs
