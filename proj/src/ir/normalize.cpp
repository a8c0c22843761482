#include "ircheck/ir/normalize.hpp"

namespace ircheck::ir {

namespace {

Instruction make_copy(const Instruction& from, ValueRef src, const std::string& ty) {
  Instruction c;
  c.kind = InstrKind::Bitcast;
  c.result = from.result;
  c.operands.push_back(std::move(src));
  c.types = {ty, ty};
  c.line = from.line;
  return c;
}

} // namespace

Module normalize_module(Module m) {
  if (m.normalized)
    return m;
  for (auto& f : m.functions) {
    for (auto& b : f.blocks) {
      std::vector<Instruction> out;
      out.reserve(b.instructions.size());
      for (auto& in : b.instructions) {
        switch (in.kind) {
        case InstrKind::Gep: {
          std::string ty = in.types.size() > 1 ? in.types[1] : "i8*";
          out.push_back(make_copy(in, in.operands[0], ty));
          break;
        }
        case InstrKind::Select: {
          // two copies into the same result register: the flow-insensitive
          // join of both arms
          out.push_back(make_copy(in, in.operands[1], in.types[1]));
          out.push_back(make_copy(in, in.operands[2], in.types[2]));
          break;
        }
        default:
          out.push_back(std::move(in));
          break;
        }
      }
      b.instructions = std::move(out);
      for (std::size_t i = 0; i < b.instructions.size(); ++i) {
        b.instructions[i].loc.block = b.label;
        b.instructions[i].loc.index = static_cast<int>(i);
      }
    }
  }
  m.normalized = true;
  return m;
}

} // namespace ircheck::ir
