#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ircheck/graphs/callgraph.hpp"
#include "ircheck/graphs/cfg.hpp"
#include "ircheck/pts/solver.hpp"

namespace ircheck::graphs {

/// One resolved callee of a call site.
struct IcfgTarget {
  std::string name;
  bool defined = false;     // has a body in the module
  bool terminating = false; // process-terminating external (exit, abort, ...)

  bool operator<(const IcfgTarget& o) const { return name < o.name; }
};

/// A call instruction with its resolved targets, in block order.
struct IcfgCall {
  ir::SourceLoc loc;
  int line = 0;
  bool direct = true;
  /// First argument is a nonzero integer constant: an abnormal exit status
  /// when the call targets a terminating external.
  bool nonzero_exit_arg = false;
  std::vector<IcfgTarget> targets;
};

struct IcfgFunction {
  std::string name;
  std::string file;
  CFG cfg;
  std::map<std::string, std::vector<IcfgCall>> calls; // per block, in order
};

/// Inter-procedural CFG over the functions reachable from the entry (plus any
/// extra roots). Call-site bindings agree with resolve_call_targets.
struct ICFG {
  std::string entry;
  std::map<std::string, IcfgFunction> functions;
  std::set<std::string> terminating_externals;

  /// Spec view: call site -> set of (callee, entry label). External callees
  /// bind to the synthetic label "<external>".
  std::map<pts::CallSiteKey, std::set<std::pair<std::string, std::string>>> call_bindings;

  /// Return bindings: (callee, exit label) -> call sites returning there.
  std::map<std::pair<std::string, std::string>, std::set<pts::CallSiteKey>>
  return_bindings() const;
};

struct IcfgOptions {
  std::vector<std::string> terminating_externals = {"exit", "abort"};
  std::vector<std::string> extra_roots; // dead functions to include
};

ICFG build_icfg(const ir::Module& m, const pts::PointsToState& s, const IcfgOptions& opts = {});

std::string to_dot(const ICFG& g);

} // namespace ircheck::graphs
