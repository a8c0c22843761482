#include "ircheck/pts/constraints.hpp"

#include <cassert>

namespace ircheck::pts {

std::string SymbolTables::display_name(VarId id) const {
  const VarInfo& v = var(id);
  switch (v.kind) {
  case VarKind::Local:
    return v.func + "::%" + v.name;
  case VarKind::Global:
    return "@" + v.name;
  case VarKind::FuncRef:
    return "&" + v.name;
  case VarKind::Return:
    return v.func + "::$ret";
  case VarKind::ObjContents:
    return "*" + object(v.obj).label();
  case VarKind::EscapeSink:
    return "$escape";
  }
  return {};
}

std::vector<std::pair<VarId, ObjId>> ConstraintSet::all_address_of() const {
  auto out = module_level.address_of;
  for (const auto& [_, g] : per_function)
    out.insert(out.end(), g.address_of.begin(), g.address_of.end());
  return out;
}

std::vector<std::pair<VarId, VarId>> ConstraintSet::all_copy() const {
  auto out = module_level.copy;
  for (const auto& [_, g] : per_function)
    out.insert(out.end(), g.copy.begin(), g.copy.end());
  return out;
}

std::vector<std::pair<VarId, VarId>> ConstraintSet::all_load() const {
  auto out = module_level.load;
  for (const auto& [_, g] : per_function)
    out.insert(out.end(), g.load.begin(), g.load.end());
  return out;
}

std::vector<std::pair<VarId, VarId>> ConstraintSet::all_store() const {
  auto out = module_level.store;
  for (const auto& [_, g] : per_function)
    out.insert(out.end(), g.store.begin(), g.store.end());
  return out;
}

namespace {

class Generator {
public:
  explicit Generator(const ir::Module& m) : m_(m) {}

  ConstraintSet run() {
    seed_globals();
    for (const auto& f : m_.functions)
      visit_function(f);
    return std::move(cs_);
  }

private:
  SymbolTables& tabs() { return cs_.tables; }

  // Pointer-valued operand -> the variable holding it, seeding address_of
  // facts for address-valued constants on first use.
  std::optional<VarId> value_var(const std::string& func, const ir::ValueRef& v,
                                 ConstraintGroup& g) {
    switch (v.kind) {
    case ir::ValueKind::Local:
      return tabs().local_var(func, v.name);
    case ir::ValueKind::Global: {
      VarId var = tabs().global_var(v.name);
      add_address_of_once(cs_.module_level, var, tabs().global_obj(v.name));
      return var;
    }
    case ir::ValueKind::FunctionRef: {
      VarId var = tabs().funcref_var(v.name);
      add_address_of_once(cs_.module_level, var, tabs().function_obj(v.name));
      return var;
    }
    default:
      (void)g;
      return std::nullopt; // constants carry no pointer identity
    }
  }

  void add_address_of_once(ConstraintGroup& g, VarId var, ObjId obj) {
    for (const auto& [v, o] : g.address_of)
      if (v == var && o == obj)
        return;
    g.address_of.emplace_back(var, obj);
  }

  void seed_globals() {
    for (const auto& g : m_.globals) {
      VarId var = tabs().global_var(g.name);
      ObjId obj = tabs().global_obj(g.name);
      add_address_of_once(cs_.module_level, var, obj);
      if (g.init == ir::GlobalVar::Init::Ref) {
        // initializer places the referenced address inside the global's cell
        VarId cell = tabs().contents_var(obj);
        if (m_.is_function_name(g.init_ref))
          add_address_of_once(cs_.module_level, cell, tabs().function_obj(g.init_ref));
        else
          add_address_of_once(cs_.module_level, cell, tabs().global_obj(g.init_ref));
      }
    }
  }

  void visit_function(const ir::Function& f) {
    ConstraintGroup& g = cs_.per_function[f.name];
    for (const auto& b : f.blocks) {
      for (const auto& in : b.instructions)
        visit_instruction(f, b, in, g);
      if (b.terminator.kind == ir::Terminator::Kind::Ret && b.terminator.value) {
        auto src = value_var(f.name, *b.terminator.value, g);
        if (src)
          g.copy.emplace_back(tabs().return_var(f.name), *src);
      }
    }
  }

  void visit_instruction(const ir::Function& f, const ir::BasicBlock& b,
                         const ir::Instruction& in, ConstraintGroup& g) {
    switch (in.kind) {
    case ir::InstrKind::Alloca: {
      VarId dst = tabs().local_var(f.name, *in.result);
      g.address_of.emplace_back(dst, tabs().alloc_obj(f.name, b.label, in.loc.index));
      break;
    }
    case ir::InstrKind::Load: {
      auto src = value_var(f.name, in.operands[0], g);
      if (src)
        g.load.emplace_back(tabs().local_var(f.name, *in.result), *src);
      break;
    }
    case ir::InstrKind::Store: {
      auto val = value_var(f.name, in.operands[0], g);
      auto ptr = value_var(f.name, in.operands[1], g);
      if (val && ptr)
        g.store.emplace_back(*ptr, *val);
      break;
    }
    case ir::InstrKind::Bitcast: { // the canonical copy form
      auto src = value_var(f.name, in.operands[0], g);
      if (src)
        g.copy.emplace_back(tabs().local_var(f.name, *in.result), *src);
      break;
    }
    case ir::InstrKind::Phi: {
      VarId dst = tabs().local_var(f.name, *in.result);
      for (const auto& opnd : in.operands) {
        auto src = value_var(f.name, opnd, g);
        if (src)
          g.copy.emplace_back(dst, *src);
      }
      break;
    }
    case ir::InstrKind::CallDirect:
    case ir::InstrKind::CallIndirect: {
      CallSiteInfo site;
      site.id = static_cast<int>(cs_.call_sites.size());
      site.caller = f.name;
      site.loc = in.loc;
      site.line = in.line;
      site.direct = in.kind == ir::InstrKind::CallDirect;
      if (site.direct)
        site.callee_name = in.operands[0].name;
      else
        site.callee_var = tabs().local_var(f.name, in.operands[0].name);
      for (std::size_t i = 1; i < in.operands.size(); ++i) {
        site.args.push_back(value_var(f.name, in.operands[i], g));
        site.arg_values.push_back(in.operands[i]);
      }
      if (in.result)
        site.result = tabs().local_var(f.name, *in.result);
      g.call_sites.push_back(site.id);
      cs_.call_sites.push_back(std::move(site));
      break;
    }
    case ir::InstrKind::Select:
    case ir::InstrKind::Gep:
      // gone after normalization; treat defensively as copies of operand 0
      if (in.result) {
        auto src = value_var(f.name, in.operands[in.kind == ir::InstrKind::Select ? 1 : 0], g);
        if (src)
          g.copy.emplace_back(tabs().local_var(f.name, *in.result), *src);
      }
      break;
    case ir::InstrKind::Icmp:
    case ir::InstrKind::Other:
      break; // no pointer semantics
    }
    // make sure every result register is a known variable, even if it never
    // receives pointer facts (points_to must answer with the empty set)
    if (in.result)
      tabs().local_var(f.name, *in.result);
  }

  const ir::Module& m_;
  ConstraintSet cs_;
};

} // namespace

ConstraintSet generate_constraints(const ir::Module& m) {
  assert(m.normalized && "constraints are generated from normalized modules");
  Generator gen(m);
  ConstraintSet cs = gen.run();
  // register every parameter so queries can name them
  for (const auto& f : m.functions)
    for (const auto& p : f.params)
      cs.tables.local_var(f.name, p.name);
  return cs;
}

} // namespace ircheck::pts
