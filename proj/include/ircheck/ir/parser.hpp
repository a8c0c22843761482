#pragma once

#include <string_view>
#include <vector>

#include "ircheck/ir/module.hpp"

namespace ircheck::ir {

struct ParseOptions {
  std::size_t max_input_bytes = 64u << 20; // 64 MiB
};

/// Parses the supported subset of textual LLVM IR. Throws ParseError (or
/// DuplicateSymbolError) on anything outside the subset that is not merely an
/// unsupported instruction; those are retained as kind Other with a
/// diagnostic.
Module parse_module(std::string_view text, const std::string& source_name = "<ir>",
                    const ParseOptions& opts = {});

/// Links several parsed modules into one by symbol name. Duplicate
/// definitions are an error; declarations merge with definitions.
Module link_modules(std::vector<Module> parts);

} // namespace ircheck::ir
