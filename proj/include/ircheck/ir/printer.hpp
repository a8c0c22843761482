#pragma once

#include <string>

#include "ircheck/ir/module.hpp"

namespace ircheck::ir {

/// Renders a Module back to textual IR. Re-parsing the output yields a
/// structurally equal Module.
std::string print_module(const Module& m);

} // namespace ircheck::ir
