#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ircheck/ir/module.hpp"
#include "ircheck/pts/constraints.hpp"

namespace ircheck::pts {

using CtxId = std::uint32_t;

/// Identifies a call site for queries: owning function plus instruction
/// position.
struct CallSiteKey {
  std::string function;
  std::string block;
  int index = 0;

  bool operator<(const CallSiteKey& o) const {
    return std::tie(function, block, index) < std::tie(o.function, o.block, o.index);
  }
  bool operator==(const CallSiteKey&) const = default;
};

/// Interned k-limited call strings. Context 0 is the empty string. A call
/// string holds the last k call sites, oldest first.
class ContextTable {
public:
  ContextTable() { contexts_.push_back({}); }

  CtxId push(CtxId ctx, int site, int k) {
    if (k == 0)
      return 0;
    std::vector<int> s = contexts_[ctx];
    s.push_back(site);
    while (static_cast<int>(s.size()) > k)
      s.erase(s.begin());
    return intern(s);
  }

  CtxId intern(const std::vector<int>& s) {
    auto it = index_.find(s);
    if (it != index_.end())
      return it->second;
    CtxId id = static_cast<CtxId>(contexts_.size());
    contexts_.push_back(s);
    index_.emplace(s, id);
    return id;
  }

  std::optional<CtxId> find(const std::vector<int>& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? std::nullopt : std::make_optional(it->second);
  }

  const std::vector<int>& call_string(CtxId id) const { return contexts_[id]; }
  std::size_t size() const { return contexts_.size(); }

private:
  std::vector<std::vector<int>> contexts_;
  std::map<std::vector<int>, CtxId> index_;
};

struct SolveOptions {
  int sensitivity = 0; // k in {0, 1, 2}
  std::string entry = "main";
  std::uint64_t budget = 10'000'000;
  enum class Worklist { Fifo, Lifo };
  Worklist worklist = Worklist::Fifo;
  bool analyze_all_functions = false; // also root every defined function
};

struct CallEdge {
  std::string caller;
  int site = 0; // index into ConstraintSet::call_sites
  std::string callee;
  CtxId ctx = 0; // caller-side context

  bool operator<(const CallEdge& o) const {
    return std::tie(caller, site, callee, ctx) < std::tie(o.caller, o.site, o.callee, o.ctx);
  }
};

struct SolveStats {
  std::size_t constraints = 0;
  std::size_t pts_facts = 0;
  std::uint64_t propagation_steps = 0;
  double wall_ms = 0.0;
};

/// The solved points-to model: pts sets per (context, variable), resolved
/// call targets per (site, context), the online-built call graph, and the
/// set of function addresses that escaped to external code. Immutable after
/// solve; safe for concurrent reads.
class PointsToState {
public:
  const ir::Module& module() const { return *module_; }
  const ConstraintSet& constraints() const { return cs_; }
  const SymbolTables& tables() const { return cs_.tables; }
  const ContextTable& contexts() const { return ctxs_; }
  int sensitivity() const { return k_; }
  const std::string& entry() const { return entry_; }
  const SolveStats& stats() const { return stats_; }
  const std::vector<CallEdge>& call_edges() const { return edges_; }
  const std::set<std::string>& escaped_functions() const { return escaped_; }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

  /// Points-to set of a variable in a specific context. Variable spellings:
  /// "fn::%reg", "fn::$ret", "@global", "&function". Unknown names throw
  /// UnknownVariableError; known-but-unassigned variables yield the empty set.
  std::vector<AbstractObject> points_to(const std::string& var,
                                        std::span<const CallSiteKey> ctx = {}) const;

  /// Union of points_to over every context the variable was solved in.
  std::vector<AbstractObject> points_to_erased(const std::string& var) const;

  /// Resolved callees of a call site in a context. Direct sites yield the
  /// named callee (external callees are opaque targets); indirect sites yield
  /// the arity-compatible function objects of the callee variable.
  std::vector<std::string> resolve_call_targets(const CallSiteKey& site,
                                                std::span<const CallSiteKey> ctx = {}) const;

  /// Union of resolve_call_targets over all contexts.
  std::vector<std::string> resolved_targets_erased(const CallSiteKey& site) const;

  /// All (context, site) resolutions, canonically keyed. Used by call-graph
  /// construction.
  const std::map<std::pair<int, CtxId>, std::vector<std::string>>& resolutions() const {
    return resolved_;
  }

  std::optional<int> site_id(const CallSiteKey& key) const;

  /// Every (function, context) pair whose constraints were instantiated.
  const std::vector<std::pair<std::string, CtxId>>& instantiations() const {
    return instantiations_;
  }

  /// Re-applies every instantiated constraint; true iff nothing changes.
  bool at_fixpoint() const;

  /// Deterministic value-based snapshot: call string -> variable display name
  /// -> object labels. Two solves of the same input must produce equal
  /// snapshots regardless of worklist order.
  std::map<std::vector<int>, std::map<std::string, std::vector<std::string>>>
  canonical_pts() const;

  /// Canonical call-graph edge list: (caller, site, callee, call string).
  std::vector<std::tuple<std::string, int, std::string, std::vector<int>>>
  canonical_edges() const;

private:
  friend class Solver;
  friend PointsToState solve(const ir::Module&, ConstraintSet, const SolveOptions&);

  std::optional<VarId> parse_var(const std::string& spec) const;
  std::optional<CtxId> resolve_ctx(std::span<const CallSiteKey> ctx) const;

  const ir::Module* module_ = nullptr;
  ConstraintSet cs_;
  ContextTable ctxs_;
  int k_ = 0;
  std::string entry_;
  std::map<std::pair<CtxId, VarId>, IdSet> pts_;
  std::map<std::pair<int, CtxId>, std::vector<std::string>> resolved_;
  std::vector<CallEdge> edges_;
  std::set<std::string> escaped_;
  std::vector<std::string> diagnostics_;
  SolveStats stats_;
  std::vector<std::pair<std::string, CtxId>> instantiations_;

  const IdSet* find_pts(CtxId ctx, VarId var) const;
};

/// D7 compatibility filter: a call site may target `target` iff the argument
/// count equals the target's arity, or the target is vararg.
bool call_compatible(const ir::Module& m, const CallSiteInfo& site, const std::string& target);

/// Solves the inclusion-constraint system to its least fixpoint reachable
/// from the entry function, building the call graph online: whenever an
/// indirect call's callee variable acquires an arity-compatible function, a
/// call edge is added and the callee's constraints are instantiated in the
/// k-limited callee context. Deterministic regardless of worklist order.
PointsToState solve(const ir::Module& m, ConstraintSet cs, const SolveOptions& opts = {});

} // namespace ircheck::pts
