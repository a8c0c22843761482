#include "ircheck/pts/solver.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <unordered_map>

#include "ircheck/errors.hpp"
#include "ircheck/support.hpp"

namespace ircheck::pts {

bool call_compatible(const ir::Module& m, const CallSiteInfo& site, const std::string& target) {
  int argc = static_cast<int>(site.args.size());
  if (const ir::Function* f = m.find_function(target))
    return f->type.param_count == argc || (f->type.is_vararg && argc >= f->type.param_count);
  if (const ir::FunctionDecl* d = m.find_declaration(target))
    return d->arity() == argc || (d->is_vararg && argc >= d->arity());
  return false;
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<std::uint32_t, std::uint32_t>& p) const {
    return std::hash<std::uint64_t>()((std::uint64_t(p.first) << 32) | p.second);
  }
};

class Solver {
public:
  Solver(const ir::Module& m, ConstraintSet cs, const SolveOptions& opts)
      : m_(m), opts_(opts) {
    state_.module_ = &m;
    state_.cs_ = std::move(cs);
    state_.k_ = opts.sensitivity;
    state_.entry_ = opts.entry;
  }

  PointsToState run() {
    Stopwatch sw;
    if (m_.find_function(opts_.entry) == nullptr)
      throw EntryNotFoundError(opts_.entry);

    escape_node_ = node(0, tables().escape_sink());
    seed_group(state_.cs_.module_level, 0);
    instantiate(opts_.entry, 0);
    if (opts_.analyze_all_functions)
      for (const auto& f : m_.functions)
        instantiate(f.name, 0);

    drain();
    // Externally escaped function pointers: any still-unresolved indirect
    // site may target any escaped function with compatible arity. Applied
    // only between fixpoints so the result does not depend on worklist order.
    while (apply_escape_targets())
      drain();

    finalize();
    state_.stats_.wall_ms = sw.elapsed_ms();
    return std::move(state_);
  }

private:
  using Node = std::uint32_t;

  SymbolTables& tables() { return state_.cs_.tables; }
  ConstraintSet& cs() { return state_.cs_; }

  Node node(CtxId ctx, VarId var) {
    if (tables().var(var).context_free())
      ctx = 0;
    auto key = std::make_pair(ctx, var);
    auto it = node_ids_.find(key);
    if (it != node_ids_.end())
      return it->second;
    Node id = static_cast<Node>(node_keys_.size());
    node_ids_.emplace(key, id);
    node_keys_.push_back(key);
    pts_.emplace_back();
    succ_.emplace_back();
    succ_set_.emplace_back();
    load_sinks_.emplace_back();
    store_srcs_.emplace_back();
    triggers_.emplace_back();
    inlist_.push_back(false);
    return id;
  }

  Node contents_node(ObjId obj) { return node(0, tables().contents_var(obj)); }

  void bump(std::uint64_t n = 1) {
    steps_ += n;
    if (steps_ > opts_.budget)
      throw BudgetExceededError(opts_.budget);
  }

  void add_pts(Node n, std::span<const ObjId> objs) {
    std::vector<ObjId> added;
    for (ObjId o : objs)
      if (pts_[n].insert(o))
        added.push_back(o);
    if (!added.empty()) {
      bump(added.size());
      growth_q_.push_back({n, std::move(added)});
    }
  }

  void add_pts_one(Node n, ObjId o) { add_pts(n, std::span<const ObjId>(&o, 1)); }

  void add_edge(Node a, Node b) {
    if (a == b)
      return;
    if (!succ_set_[a].insert(b).second)
      return;
    succ_[a].push_back(b);
    if (!pts_[a].empty())
      add_pts(b, pts_[a].items());
  }

  void seed_group(const ConstraintGroup& g, CtxId ctx) {
    for (const auto& [v, o] : g.address_of)
      add_pts_one(node(ctx, v), o);
    for (const auto& [d, s] : g.copy)
      add_edge(node(ctx, s), node(ctx, d));
    for (const auto& [d, s] : g.load) {
      Node p = node(ctx, s);
      Node dst = node(ctx, d);
      load_sinks_[p].push_back(dst);
      for (ObjId o : pts_[p].items())
        add_edge(contents_node(o), dst);
    }
    for (const auto& [p_var, v_var] : g.store) {
      Node p = node(ctx, p_var);
      Node src = node(ctx, v_var);
      store_srcs_[p].push_back(src);
      for (ObjId o : pts_[p].items())
        add_edge(src, contents_node(o));
    }
    for (int site_id : g.call_sites)
      setup_site(site_id, ctx);
  }

  void instantiate(const std::string& fname, CtxId ctx) {
    if (!instantiated_.emplace(fname, ctx).second)
      return;
    auto it = cs().per_function.find(fname);
    if (it == cs().per_function.end())
      return;
    seed_group(it->second, ctx);
  }

  int instance_id(int site, CtxId ctx) {
    auto key = std::make_pair(site, ctx);
    auto it = instance_ids_.find(key);
    if (it != instance_ids_.end())
      return it->second;
    int id = static_cast<int>(instances_.size());
    instance_ids_.emplace(key, id);
    instances_.push_back({site, ctx, {}});
    return id;
  }

  void setup_site(int site_id, CtxId ctx) {
    const CallSiteInfo& site = cs().call_sites[site_id];
    int inst = instance_id(site_id, ctx);
    if (site.direct) {
      bind_target(inst, site.callee_name);
      return;
    }
    Node callee = node(ctx, site.callee_var);
    triggers_[callee].push_back(inst);
    for (ObjId o : pts_[callee].items())
      offer_indirect_target(inst, o);
  }

  void offer_indirect_target(int inst, ObjId obj) {
    const AbstractObject& o = tables().object(obj);
    const CallSiteInfo& site = cs().call_sites[instances_[inst].site];
    if (o.kind != ObjKind::Function) {
      note_non_function_target(instances_[inst].site);
      return;
    }
    if (!call_compatible(m_, site, o.name))
      return;
    bind_target(inst, o.name);
  }

  void note_non_function_target(int site_id) {
    if (!non_function_sites_.insert(site_id).second)
      return;
    const CallSiteInfo& site = cs().call_sites[site_id];
    state_.diagnostics_.push_back("indirect call at " + site.caller + ":" + site.loc.block +
                                  ":" + std::to_string(site.loc.index) +
                                  " may target a non-function object (NonFunctionTarget)");
  }

  void bind_target(int inst, const std::string& target) {
    SiteInstance& si = instances_[inst];
    if (!si.resolved.insert(target).second)
      return;
    const CallSiteInfo& site = cs().call_sites[si.site];
    state_.edges_.push_back({site.caller, si.site, target, si.ctx});

    if (const ir::Function* callee = m_.find_function(target)) {
      CtxId c2 = state_.ctxs_.push(si.ctx, si.site, opts_.sensitivity);
      instantiate(target, c2);
      std::size_t n = std::min(site.args.size(), callee->params.size());
      for (std::size_t i = 0; i < n; ++i)
        if (site.args[i])
          add_edge(node(si.ctx, *site.args[i]),
                   node(c2, tables().local_var(target, callee->params[i].name)));
      if (site.result)
        add_edge(node(c2, tables().return_var(target)), node(si.ctx, *site.result));
      return;
    }
    // declared-only callee: its body contributes nothing, pointer arguments
    // escape to the outside world
    for (const auto& a : site.args)
      if (a)
        add_edge(node(si.ctx, *a), escape_node_);
  }

  void process_growth(Node n, const std::vector<ObjId>& objs) {
    for (Node d : load_sinks_[n])
      for (ObjId o : objs)
        add_edge(contents_node(o), d);
    for (Node s : store_srcs_[n])
      for (ObjId o : objs)
        add_edge(s, contents_node(o));
    for (std::size_t t = 0; t < triggers_[n].size(); ++t)
      for (ObjId o : objs)
        offer_indirect_target(triggers_[n][t], o);
    if (n == escape_node_) {
      for (ObjId o : objs) {
        const AbstractObject& obj = tables().object(o);
        if (obj.kind == ObjKind::Function)
          escaped_functions_.insert(obj.name);
        else
          add_edge(contents_node(o), escape_node_); // contents escape too
      }
    }
    push_work(n);
  }

  void push_work(Node n) {
    if (inlist_[n])
      return;
    inlist_[n] = true;
    worklist_.push_back(n);
  }

  void drain() {
    while (true) {
      if (!growth_q_.empty()) {
        auto [n, objs] = std::move(growth_q_.front());
        growth_q_.pop_front();
        process_growth(n, objs);
        continue;
      }
      if (worklist_.empty())
        break;
      Node n;
      if (opts_.worklist == SolveOptions::Worklist::Fifo) {
        n = worklist_.front();
        worklist_.pop_front();
      } else {
        n = worklist_.back();
        worklist_.pop_back();
      }
      inlist_[n] = false;
      bump();
      for (Node s : succ_[n])
        add_pts(s, pts_[n].items());
    }
  }

  bool apply_escape_targets() {
    if (escaped_functions_.empty())
      return false;
    bool changed = false;
    for (const auto& [key, inst] : instance_ids_) { // deterministic (site, ctx) order
      SiteInstance& si = instances_[inst];
      const CallSiteInfo& site = cs().call_sites[si.site];
      if (site.direct || !si.resolved.empty())
        continue;
      bool bound_any = false;
      for (const auto& f : escaped_functions_) {
        if (call_compatible(m_, site, f)) {
          bind_target(inst, f);
          bound_any = true;
          changed = true;
        }
      }
      if (bound_any)
        state_.diagnostics_.push_back(
            "indirect call at " + site.caller + ":" + site.loc.block + ":" +
            std::to_string(site.loc.index) +
            " resolved to externally escaped functions (conservative assumption)");
    }
    return changed;
  }

  void finalize() {
    for (std::size_t i = 0; i < node_keys_.size(); ++i)
      state_.pts_[node_keys_[i]] = std::move(pts_[i]);
    for (const auto& [key, inst] : instance_ids_) {
      const auto& r = instances_[inst].resolved;
      state_.resolved_[key] = std::vector<std::string>(r.begin(), r.end());
    }
    std::sort(state_.edges_.begin(), state_.edges_.end());
    state_.edges_.erase(std::unique(state_.edges_.begin(), state_.edges_.end(),
                                    [](const CallEdge& a, const CallEdge& b) {
                                      return !(a < b) && !(b < a);
                                    }),
                        state_.edges_.end());
    state_.escaped_ = std::move(escaped_functions_);
    state_.instantiations_.assign(instantiated_.begin(), instantiated_.end());
    state_.stats_.constraints = cs().total_constraints();
    state_.stats_.propagation_steps = steps_;
    std::size_t facts = 0;
    for (const auto& [key, set] : state_.pts_)
      facts += set.size();
    state_.stats_.pts_facts = facts;
  }

  struct SiteInstance {
    int site;
    CtxId ctx;
    std::set<std::string> resolved;
  };

  const ir::Module& m_;
  SolveOptions opts_;
  PointsToState state_;

  std::unordered_map<std::pair<CtxId, VarId>, Node, PairHash> node_ids_;
  std::vector<std::pair<CtxId, VarId>> node_keys_;
  std::vector<IdSet> pts_;
  std::vector<std::vector<Node>> succ_;
  std::vector<std::set<Node>> succ_set_;
  std::vector<std::vector<Node>> load_sinks_;
  std::vector<std::vector<Node>> store_srcs_;
  std::vector<std::vector<int>> triggers_;
  std::vector<char> inlist_;
  std::deque<Node> worklist_;
  std::deque<std::pair<Node, std::vector<ObjId>>> growth_q_;
  std::set<std::pair<std::string, CtxId>> instantiated_;
  std::map<std::pair<int, CtxId>, int> instance_ids_;
  std::vector<SiteInstance> instances_;
  std::set<int> non_function_sites_;
  std::set<std::string> escaped_functions_;
  Node escape_node_ = 0;
  std::uint64_t steps_ = 0;
};

} // namespace

PointsToState solve(const ir::Module& m, ConstraintSet cs, const SolveOptions& opts) {
  assert(opts.sensitivity >= 0 && opts.sensitivity <= 2);
  Solver solver(m, std::move(cs), opts);
  return solver.run();
}

const IdSet* PointsToState::find_pts(CtxId ctx, VarId var) const {
  if (tables().var(var).context_free())
    ctx = 0;
  auto it = pts_.find({ctx, var});
  return it == pts_.end() ? nullptr : &it->second;
}

std::optional<VarId> PointsToState::parse_var(const std::string& spec) const {
  if (spec.empty())
    return std::nullopt;
  if (spec[0] == '@')
    return tables().find_global(spec.substr(1));
  if (spec[0] == '&')
    return tables().find_funcref(spec.substr(1));
  auto sep = spec.find("::");
  if (sep == std::string::npos)
    return std::nullopt;
  std::string func = spec.substr(0, sep);
  std::string rest = spec.substr(sep + 2);
  if (rest == "$ret")
    return tables().find_return(func);
  if (!rest.empty() && rest[0] == '%')
    return tables().find_local(func, rest.substr(1));
  return std::nullopt;
}

std::optional<int> PointsToState::site_id(const CallSiteKey& key) const {
  for (const auto& site : cs_.call_sites)
    if (site.caller == key.function && site.loc.block == key.block &&
        site.loc.index == key.index)
      return site.id;
  return std::nullopt;
}

std::optional<CtxId> PointsToState::resolve_ctx(std::span<const CallSiteKey> ctx) const {
  std::vector<int> ids;
  for (const auto& key : ctx) {
    auto id = site_id(key);
    if (!id)
      return std::nullopt;
    ids.push_back(*id);
  }
  while (static_cast<int>(ids.size()) > k_)
    ids.erase(ids.begin());
  return ctxs_.find(ids);
}

std::vector<AbstractObject> PointsToState::points_to(const std::string& var,
                                                     std::span<const CallSiteKey> ctx) const {
  auto v = parse_var(var);
  if (!v)
    throw UnknownVariableError(var);
  auto c = resolve_ctx(ctx);
  if (!c)
    return {};
  const IdSet* set = find_pts(*c, *v);
  std::vector<AbstractObject> out;
  if (set)
    for (ObjId o : set->items())
      out.push_back(tables().object(o));
  return out;
}

std::vector<AbstractObject> PointsToState::points_to_erased(const std::string& var) const {
  auto v = parse_var(var);
  if (!v)
    throw UnknownVariableError(var);
  IdSet all;
  for (const auto& [key, set] : pts_)
    if (key.second == *v)
      all.merge(set);
  std::vector<AbstractObject> out;
  for (ObjId o : all.items())
    out.push_back(tables().object(o));
  return out;
}

std::vector<std::string> PointsToState::resolve_call_targets(
    const CallSiteKey& site, std::span<const CallSiteKey> ctx) const {
  auto id = site_id(site);
  if (!id)
    return {};
  auto c = resolve_ctx(ctx);
  if (!c)
    return {};
  auto it = resolved_.find({*id, *c});
  return it == resolved_.end() ? std::vector<std::string>{} : it->second;
}

std::vector<std::string> PointsToState::resolved_targets_erased(const CallSiteKey& site) const {
  auto id = site_id(site);
  if (!id)
    return {};
  std::set<std::string> names;
  for (const auto& [key, targets] : resolved_)
    if (key.first == *id)
      names.insert(targets.begin(), targets.end());
  return {names.begin(), names.end()};
}

bool PointsToState::at_fixpoint() const {
  auto subset = [&](const IdSet* a, const IdSet* b) {
    if (!a || a->empty())
      return true;
    if (!b)
      return false;
    for (ObjId o : a->items())
      if (!b->contains(o))
        return false;
    return true;
  };
  auto contents = [&](ObjId o) -> const IdSet* {
    auto v = tables().find_contents(o);
    return v ? find_pts(0, *v) : nullptr;
  };

  auto check_site = [&](int sid, CtxId ctx) {
    const CallSiteInfo& site = cs_.call_sites[sid];
    auto res_it = resolved_.find({sid, ctx});
    const std::vector<std::string>* res =
        res_it == resolved_.end() ? nullptr : &res_it->second;
    auto has = [&](const std::string& n) {
      return res && std::binary_search(res->begin(), res->end(), n);
    };

    if (site.direct) {
      if (!has(site.callee_name))
        return false;
    } else {
      const IdSet* callee = find_pts(ctx, site.callee_var);
      if (callee)
        for (ObjId o : callee->items()) {
          const AbstractObject& obj = tables().object(o);
          if (obj.kind == ObjKind::Function && call_compatible(*module_, site, obj.name) &&
              !has(obj.name))
            return false;
        }
    }
    if (!res)
      return true;
    for (const auto& target : *res) {
      const ir::Function* callee = module_->find_function(target);
      if (!callee)
        continue;
      std::vector<int> s = ctxs_.call_string(ctx);
      if (k_ > 0) {
        s.push_back(sid);
        while (static_cast<int>(s.size()) > k_)
          s.erase(s.begin());
      } else {
        s.clear();
      }
      auto c2 = ctxs_.find(s);
      if (!c2)
        return false;
      std::size_t n = std::min(site.args.size(), callee->params.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (!site.args[i])
          continue;
        auto p = tables().find_local(target, callee->params[i].name);
        if (!p || !subset(find_pts(ctx, *site.args[i]), find_pts(*c2, *p)))
          return false;
      }
      if (site.result) {
        auto rv = tables().find_return(target);
        if (rv && !subset(find_pts(*c2, *rv), find_pts(ctx, *site.result)))
          return false;
      }
    }
    return true;
  };

  auto check_group = [&](const ConstraintGroup& g, CtxId ctx) {
    for (const auto& [v, o] : g.address_of) {
      const IdSet* set = find_pts(ctx, v);
      if (!set || !set->contains(o))
        return false;
    }
    for (const auto& [d, s] : g.copy)
      if (!subset(find_pts(ctx, s), find_pts(ctx, d)))
        return false;
    for (const auto& [d, s] : g.load) {
      const IdSet* ptr = find_pts(ctx, s);
      if (!ptr)
        continue;
      for (ObjId o : ptr->items())
        if (!subset(contents(o), find_pts(ctx, d)))
          return false;
    }
    for (const auto& [p, v] : g.store) {
      const IdSet* ptr = find_pts(ctx, p);
      if (!ptr)
        continue;
      for (ObjId o : ptr->items())
        if (!subset(find_pts(ctx, v), contents(o)))
          return false;
    }
    for (int sid : g.call_sites)
      if (!check_site(sid, ctx))
        return false;
    return true;
  };

  if (!check_group(cs_.module_level, 0))
    return false;
  for (const auto& [fname, ctx] : instantiations_) {
    auto it = cs_.per_function.find(fname);
    if (it != cs_.per_function.end() && !check_group(it->second, ctx))
      return false;
  }
  return true;
}

std::map<std::vector<int>, std::map<std::string, std::vector<std::string>>>
PointsToState::canonical_pts() const {
  std::map<std::vector<int>, std::map<std::string, std::vector<std::string>>> out;
  for (const auto& [key, set] : pts_) {
    if (set.empty())
      continue;
    std::vector<std::string> labels;
    for (ObjId o : set.items())
      labels.push_back(tables().object(o).label());
    out[ctxs_.call_string(key.first)][tables().display_name(key.second)] = std::move(labels);
  }
  return out;
}

std::vector<std::tuple<std::string, int, std::string, std::vector<int>>>
PointsToState::canonical_edges() const {
  std::vector<std::tuple<std::string, int, std::string, std::vector<int>>> out;
  for (const auto& e : edges_)
    out.emplace_back(e.caller, e.site, e.callee, ctxs_.call_string(e.ctx));
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace ircheck::pts
