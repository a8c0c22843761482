#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ircheck/ir/module.hpp"
#include "ircheck/support.hpp"

namespace ircheck::pts {

using VarId = std::uint32_t;
using ObjId = std::uint32_t;

enum class ObjKind { Function, Alloc, Global };

/// An abstract memory object: a function, an alloca site, or a global slot.
struct AbstractObject {
  ObjKind kind = ObjKind::Global;
  std::string name;  // function or global name; alloca: owning function
  std::string block; // alloca only
  int index = 0;     // alloca only

  std::string label() const {
    switch (kind) {
    case ObjKind::Function:
      return "fn:" + name;
    case ObjKind::Global:
      return "glob:" + name;
    case ObjKind::Alloc:
      return "alloc:" + name + ":" + block + ":" + std::to_string(index);
    }
    return {};
  }

  bool operator==(const AbstractObject&) const = default;
};

enum class VarKind {
  Local,       // register inside a function
  Global,      // the address-valued constant @g
  FuncRef,     // the address-valued constant @f for a function
  Return,      // a function's return value
  ObjContents, // the contents of an abstract object (one cell per object)
  EscapeSink,  // values handed to external code
};

struct VarInfo {
  VarKind kind;
  std::string func; // Local/Return: owning function
  std::string name; // Local: register; Global/FuncRef: symbol
  ObjId obj = 0;    // ObjContents: the object

  /// True for vars that exist once regardless of calling context.
  bool context_free() const { return kind != VarKind::Local && kind != VarKind::Return; }
};

/// Interning tables shared by constraint generation and the solver.
class SymbolTables {
public:
  VarId local_var(const std::string& func, const std::string& reg) {
    return intern_var("l:" + func + "::%" + reg, {VarKind::Local, func, reg, 0});
  }
  VarId global_var(const std::string& name) {
    return intern_var("g:@" + name, {VarKind::Global, {}, name, 0});
  }
  VarId funcref_var(const std::string& name) {
    return intern_var("f:&" + name, {VarKind::FuncRef, {}, name, 0});
  }
  VarId return_var(const std::string& func) {
    return intern_var("r:" + func + "::$ret", {VarKind::Return, func, {}, 0});
  }
  VarId contents_var(ObjId obj) {
    return intern_var("c:*" + object(obj).label(), {VarKind::ObjContents, {}, {}, obj});
  }
  VarId escape_sink() { return intern_var("$escape", {VarKind::EscapeSink, {}, {}, 0}); }

  std::optional<VarId> find_local(const std::string& func, const std::string& reg) const {
    return find_key("l:" + func + "::%" + reg);
  }
  std::optional<VarId> find_global(const std::string& name) const {
    return find_key("g:@" + name);
  }
  std::optional<VarId> find_funcref(const std::string& name) const {
    return find_key("f:&" + name);
  }
  std::optional<VarId> find_return(const std::string& func) const {
    return find_key("r:" + func + "::$ret");
  }
  std::optional<VarId> find_contents(ObjId obj) const {
    return find_key("c:*" + object(obj).label());
  }

  ObjId function_obj(const std::string& name) {
    return intern_obj({ObjKind::Function, name, {}, 0});
  }
  ObjId global_obj(const std::string& name) {
    return intern_obj({ObjKind::Global, name, {}, 0});
  }
  ObjId alloc_obj(const std::string& func, const std::string& block, int index) {
    return intern_obj({ObjKind::Alloc, func, block, index});
  }
  std::optional<ObjId> find_obj(const AbstractObject& o) const {
    auto id = obj_names_.lookup(o.label());
    return id == StringInterner::npos ? std::nullopt : std::make_optional(id);
  }

  const VarInfo& var(VarId id) const { return var_infos_[id]; }
  const std::string& var_name(VarId id) const { return var_names_.name(id); }
  const AbstractObject& object(ObjId id) const { return objects_[id]; }
  std::size_t num_vars() const { return var_infos_.size(); }
  std::size_t num_objects() const { return objects_.size(); }

  /// Pretty name for reports: "main::%one", "@g", "&first", "*alloc:...".
  std::string display_name(VarId id) const;

private:
  std::optional<VarId> find_key(const std::string& key) const {
    auto id = var_names_.lookup(key);
    return id == StringInterner::npos ? std::nullopt : std::make_optional(id);
  }

  VarId intern_var(const std::string& key, VarInfo info) {
    auto before = var_names_.size();
    VarId id = var_names_.intern(key);
    if (var_names_.size() > before)
      var_infos_.push_back(std::move(info));
    return id;
  }

  ObjId intern_obj(AbstractObject o) {
    auto before = obj_names_.size();
    ObjId id = obj_names_.intern(o.label());
    if (obj_names_.size() > before)
      objects_.push_back(std::move(o));
    return id;
  }

  StringInterner var_names_;
  StringInterner obj_names_;
  std::vector<VarInfo> var_infos_;
  std::vector<AbstractObject> objects_;
};

/// A call instruction captured for the solver and the call graph.
struct CallSiteInfo {
  int id = 0;
  std::string caller;
  ir::SourceLoc loc;
  int line = 0;
  bool direct = true;
  std::string callee_name;             // direct only
  VarId callee_var = 0;                // indirect only
  std::vector<std::optional<VarId>> args; // one entry per argument; symbolic only
  std::vector<ir::ValueRef> arg_values;   // full argument list (for exit-status checks)
  std::optional<VarId> result;
};

/// Inclusion constraints of one function (or of the module itself for
/// context-free seeds). All pairs are (dst, src).
struct ConstraintGroup {
  std::vector<std::pair<VarId, ObjId>> address_of;
  std::vector<std::pair<VarId, VarId>> copy;
  std::vector<std::pair<VarId, VarId>> load;
  std::vector<std::pair<VarId, VarId>> store;
  std::vector<int> call_sites; // indices into ConstraintSet::call_sites
};

struct ConstraintSet {
  SymbolTables tables;
  ConstraintGroup module_level;
  std::map<std::string, ConstraintGroup> per_function;
  std::vector<CallSiteInfo> call_sites;

  std::size_t total_constraints() const {
    std::size_t n = module_level.address_of.size() + module_level.copy.size() +
                    module_level.load.size() + module_level.store.size();
    for (const auto& [_, g] : per_function)
      n += g.address_of.size() + g.copy.size() + g.load.size() + g.store.size();
    return n;
  }

  // flattened views, used by tests and the naive reference solver
  std::vector<std::pair<VarId, ObjId>> all_address_of() const;
  std::vector<std::pair<VarId, VarId>> all_copy() const;
  std::vector<std::pair<VarId, VarId>> all_load() const;
  std::vector<std::pair<VarId, VarId>> all_store() const;
};

/// Derives inclusion constraints from a normalized module. One address_of per
/// alloca/global/function-reference use, one copy per pointer copy or phi
/// arm, load/store constraints per memory access, one CallSiteInfo per call.
ConstraintSet generate_constraints(const ir::Module& m);

} // namespace ircheck::pts
