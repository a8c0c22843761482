#pragma once

#include "ircheck/grammar/grammar.hpp"

namespace ircheck::grammar {

/// Removes unreachable and unproductive nonterminals, inlines
/// single-production nonterminals of body length <= 1 (epsilon-only rules
/// and unit chains), and binarizes bodies to length <= 2 for intersection.
/// Language-preserving and idempotent.
EventGrammar simplify_grammar(const EventGrammar& g);

} // namespace ircheck::grammar
