#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ircheck::ir {

enum class ValueKind { Local, Global, FunctionRef, ConstInt, Null, Undef };

/// A reference to a value as it appears in an instruction operand. Symbol
/// kinds (Local/Global/FunctionRef) carry a name; ConstInt carries the value.
struct ValueRef {
  ValueKind kind = ValueKind::Undef;
  std::string name;
  std::int64_t value = 0;

  static ValueRef local(std::string n) { return {ValueKind::Local, std::move(n), 0}; }
  static ValueRef global(std::string n) { return {ValueKind::Global, std::move(n), 0}; }
  static ValueRef function(std::string n) { return {ValueKind::FunctionRef, std::move(n), 0}; }
  static ValueRef const_int(std::int64_t v) { return {ValueKind::ConstInt, {}, v}; }
  static ValueRef null() { return {ValueKind::Null, {}, 0}; }
  static ValueRef undef() { return {ValueKind::Undef, {}, 0}; }

  bool is_symbolic() const {
    return kind == ValueKind::Local || kind == ValueKind::Global ||
           kind == ValueKind::FunctionRef;
  }

  bool operator==(const ValueRef&) const = default;
};

enum class InstrKind {
  Alloca,
  Load,
  Store,
  CallDirect,
  CallIndirect,
  Bitcast, // also the canonical pointer-copy form after normalization
  Phi,
  Select,
  Gep,
  Icmp,
  Other,
};

/// Position of an instruction: block label plus index in the block's
/// instruction list (terminators are stored separately and have no index).
struct SourceLoc {
  std::string block;
  int index = 0;

  bool operator==(const SourceLoc&) const = default;
};

struct Instruction {
  InstrKind kind = InstrKind::Other;
  std::vector<ValueRef> operands;
  std::optional<std::string> result; // register name without '%'
  SourceLoc loc;

  /// Kind-specific type strings, kept verbatim (canonical token spelling) so
  /// modules can be printed back out. Analyses never interpret these.
  std::vector<std::string> types;
  std::vector<std::string> phi_labels; // Phi: incoming block per operand
  std::string aux;                     // Icmp predicate / Gep flags / raw text for Other
  int line = 0;                        // source line, excluded from equality

  bool operator==(const Instruction& o) const {
    return kind == o.kind && operands == o.operands && result == o.result && loc == o.loc &&
           types == o.types && phi_labels == o.phi_labels && aux == o.aux;
  }
};

struct Terminator {
  enum class Kind { Br, CondBr, Ret };

  Kind kind = Kind::Ret;
  std::optional<ValueRef> value;    // CondBr condition / Ret value
  std::vector<std::string> targets; // branch target labels
  std::string type;                 // condition / return value type
  int line = 0;

  bool operator==(const Terminator& o) const {
    return kind == o.kind && value == o.value && targets == o.targets && type == o.type;
  }
};

struct BasicBlock {
  std::string label;
  std::vector<Instruction> instructions;
  Terminator terminator;

  bool operator==(const BasicBlock&) const = default;
};

struct Param {
  std::string type;
  std::string name;

  bool operator==(const Param&) const = default;
};

struct FunctionType {
  std::string return_type;
  int param_count = 0;
  bool is_vararg = false;

  bool operator==(const FunctionType&) const = default;
};

struct Function {
  std::string name;
  std::vector<Param> params;
  std::vector<BasicBlock> blocks;
  FunctionType type;
  std::string source_file; // excluded from equality

  const std::string& entry_label() const { return blocks.front().label; }

  const BasicBlock* find_block(const std::string& label) const {
    for (const auto& b : blocks)
      if (b.label == label)
        return &b;
    return nullptr;
  }

  bool operator==(const Function& o) const {
    return name == o.name && params == o.params && blocks == o.blocks && type == o.type;
  }
};

struct GlobalVar {
  enum class Init { None, Int, Null, Undef, Zero, CString, Ref };

  std::string name;
  std::string type;
  Init init = Init::None;
  std::int64_t init_int = 0;
  std::string init_ref;  // Ref: referenced global or function name
  std::string init_text; // CString: verbatim c"..." spelling
  bool is_constant = false;

  bool operator==(const GlobalVar&) const = default;
};

struct FunctionDecl {
  std::string name;
  std::string return_type;
  std::vector<std::string> param_types;
  bool is_vararg = false;

  int arity() const { return static_cast<int>(param_types.size()); }

  bool operator==(const FunctionDecl&) const = default;
};

struct Diagnostic {
  std::string message;
  std::string function;
  SourceLoc loc;
  int line = 0;
};

struct Module {
  std::vector<GlobalVar> globals;
  std::vector<FunctionDecl> declarations;
  std::vector<Function> functions;
  bool normalized = false;

  /// Non-fatal notes gathered while parsing (e.g. instructions retained as
  /// kind Other). Not part of structural equality.
  std::vector<Diagnostic> diagnostics;

  const Function* find_function(const std::string& name) const {
    for (const auto& f : functions)
      if (f.name == name)
        return &f;
    return nullptr;
  }

  const FunctionDecl* find_declaration(const std::string& name) const {
    for (const auto& d : declarations)
      if (d.name == name)
        return &d;
    return nullptr;
  }

  const GlobalVar* find_global(const std::string& name) const {
    for (const auto& g : globals)
      if (g.name == name)
        return &g;
    return nullptr;
  }

  bool is_function_name(const std::string& name) const {
    return find_function(name) != nullptr || find_declaration(name) != nullptr;
  }

  bool operator==(const Module& o) const {
    return globals == o.globals && declarations == o.declarations &&
           functions == o.functions && normalized == o.normalized;
  }
};

} // namespace ircheck::ir
