#pragma once

#include "ircheck/ir/module.hpp"

namespace ircheck::ir {

/// Rewrites pointer-irrelevant address arithmetic into plain copies:
/// `getelementptr` collapses to a copy of its base pointer (field-insensitive
/// memory model), `select` becomes one copy per arm, `bitcast` is already a
/// copy. Idempotent; never changes the number of functions, blocks, or
/// terminators.
Module normalize_module(Module m);

} // namespace ircheck::ir
