#pragma once

#include "ircheck/grammar/dfa.hpp"
#include "ircheck/grammar/grammar.hpp"

namespace ircheck::grammar {

/// Product construction: L(result) = L(g) ∩ L(a). Requires g binarized
/// (body length <= 2, as produced by simplify_grammar) and a total over g's
/// terminal alphabet. Terminal provenance is preserved.
EventGrammar intersect(const EventGrammar& g, const ViolationDFA& a);

} // namespace ircheck::grammar
