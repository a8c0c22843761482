#include "ircheck/ir/printer.hpp"

#include <sstream>

namespace ircheck::ir {

namespace {

void print_value(std::ostream& os, const ValueRef& v) {
  switch (v.kind) {
  case ValueKind::Local:
    os << '%' << v.name;
    break;
  case ValueKind::Global:
  case ValueKind::FunctionRef:
    os << '@' << v.name;
    break;
  case ValueKind::ConstInt:
    os << v.value;
    break;
  case ValueKind::Null:
    os << "null";
    break;
  case ValueKind::Undef:
    os << "undef";
    break;
  }
}

void print_typed(std::ostream& os, const std::string& ty, const ValueRef& v) {
  os << ty << ' ';
  print_value(os, v);
}

void print_instruction(std::ostream& os, const Instruction& in) {
  os << "  ";
  if (in.kind == InstrKind::Other) {
    // the raw captured line already carries any `%r = ` prefix
    os << in.aux << '\n';
    return;
  }
  if (in.result)
    os << '%' << *in.result << " = ";
  switch (in.kind) {
  case InstrKind::Alloca:
    os << "alloca " << in.types[0];
    if (in.types.size() > 1) {
      os << ", ";
      print_typed(os, in.types[1], in.operands[0]);
    }
    break;
  case InstrKind::Load:
    os << "load " << in.types[0] << ", " << in.types[1] << ' ';
    print_value(os, in.operands[0]);
    break;
  case InstrKind::Store:
    os << "store ";
    print_typed(os, in.types[0], in.operands[0]);
    os << ", ";
    print_typed(os, in.types[1], in.operands[1]);
    break;
  case InstrKind::CallDirect:
  case InstrKind::CallIndirect: {
    os << "call " << in.types[0] << ' ';
    print_value(os, in.operands[0]);
    os << '(';
    for (std::size_t i = 1; i < in.operands.size(); ++i) {
      if (i > 1)
        os << ", ";
      print_typed(os, in.types[i], in.operands[i]);
    }
    os << ')';
    break;
  }
  case InstrKind::Bitcast:
    os << "bitcast ";
    print_typed(os, in.types[0], in.operands[0]);
    os << " to " << in.types[1];
    break;
  case InstrKind::Gep: {
    os << "getelementptr ";
    if (in.aux == "inbounds")
      os << "inbounds ";
    os << in.types[0] << ", ";
    print_typed(os, in.types[1], in.operands[0]);
    for (std::size_t i = 1; i < in.operands.size(); ++i) {
      os << ", ";
      print_typed(os, in.types[i + 1], in.operands[i]);
    }
    break;
  }
  case InstrKind::Phi:
    os << "phi " << in.types[0] << ' ';
    for (std::size_t i = 0; i < in.operands.size(); ++i) {
      if (i > 0)
        os << ", ";
      os << "[ ";
      print_value(os, in.operands[i]);
      os << ", %" << in.phi_labels[i] << " ]";
    }
    break;
  case InstrKind::Select:
    os << "select ";
    print_typed(os, in.types[0], in.operands[0]);
    os << ", ";
    print_typed(os, in.types[1], in.operands[1]);
    os << ", ";
    print_typed(os, in.types[2], in.operands[2]);
    break;
  case InstrKind::Icmp:
    os << "icmp " << in.aux << ' ';
    print_typed(os, in.types[0], in.operands[0]);
    os << ", ";
    print_value(os, in.operands[1]);
    break;
  case InstrKind::Other:
    break; // handled above
  }
  os << '\n';
}

void print_terminator(std::ostream& os, const Terminator& t) {
  os << "  ";
  switch (t.kind) {
  case Terminator::Kind::Ret:
    if (t.value) {
      os << "ret ";
      print_typed(os, t.type, *t.value);
    } else {
      os << "ret void";
    }
    break;
  case Terminator::Kind::Br:
    os << "br label %" << t.targets[0];
    break;
  case Terminator::Kind::CondBr:
    os << "br ";
    print_typed(os, t.type, *t.value);
    os << ", label %" << t.targets[0] << ", label %" << t.targets[1];
    break;
  }
  os << '\n';
}

} // namespace

std::string print_module(const Module& m) {
  std::ostringstream os;
  for (const auto& g : m.globals) {
    os << '@' << g.name << " = " << (g.is_constant ? "constant " : "global ") << g.type;
    switch (g.init) {
    case GlobalVar::Init::None:
      break;
    case GlobalVar::Init::Int:
      os << ' ' << g.init_int;
      break;
    case GlobalVar::Init::Null:
      os << " null";
      break;
    case GlobalVar::Init::Undef:
      os << " undef";
      break;
    case GlobalVar::Init::Zero:
      os << " zeroinitializer";
      break;
    case GlobalVar::Init::CString:
      os << ' ' << g.init_text;
      break;
    case GlobalVar::Init::Ref:
      os << " @" << g.init_ref;
      break;
    }
    os << '\n';
  }
  if (!m.globals.empty())
    os << '\n';
  for (const auto& d : m.declarations) {
    os << "declare " << d.return_type << " @" << d.name << '(';
    for (std::size_t i = 0; i < d.param_types.size(); ++i) {
      if (i > 0)
        os << ", ";
      os << d.param_types[i];
    }
    if (d.is_vararg) {
      if (!d.param_types.empty())
        os << ", ";
      os << "...";
    }
    os << ")\n";
  }
  if (!m.declarations.empty())
    os << '\n';
  for (const auto& f : m.functions) {
    os << "define " << f.type.return_type << " @" << f.name << '(';
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i > 0)
        os << ", ";
      os << f.params[i].type << " %" << f.params[i].name;
    }
    if (f.type.is_vararg) {
      if (!f.params.empty())
        os << ", ";
      os << "...";
    }
    os << ") {\n";
    for (const auto& b : f.blocks) {
      os << b.label << ":\n";
      for (const auto& in : b.instructions)
        print_instruction(os, in);
      print_terminator(os, b.terminator);
    }
    os << "}\n\n";
  }
  return os.str();
}

} // namespace ircheck::ir
