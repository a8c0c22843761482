#pragma once

#include <string>
#include <vector>

#include "ircheck/grammar/grammar.hpp"
#include "ircheck/graphs/icfg.hpp"

namespace ircheck::grammar {

struct ExtractOptions {
  /// When false, paths truncated by an abnormal exit (abort, or exit with a
  /// nonzero constant status) are dropped from the language. Rule checking
  /// uses false; the plain program-behaviour language uses true.
  bool include_failure_exits = true;

  /// Expand indirect-call alternations per calling context instead of using
  /// the context-erased target sets. Requires `state` and k >= 1 to differ
  /// from the default.
  bool context_qualified = false;
  const pts::PointsToState* state = nullptr;
};

/// Transforms the ICFG into a context-free grammar whose terminal strings are
/// the event sequences along all call/return-matched terminating paths from
/// `entry` (paths end at a return of the entry function or at a
/// process-terminating call). Calls to alphabet functions contribute
/// terminals; calls to analyzed functions embed the callee's nonterminal;
/// indirect calls become an alternation over their resolved targets.
EventGrammar extract_grammar(const graphs::ICFG& icfg, const std::vector<std::string>& alphabet,
                             const std::string& entry, const ExtractOptions& opts = {});

} // namespace ircheck::grammar
