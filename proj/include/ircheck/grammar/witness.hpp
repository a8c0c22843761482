#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ircheck/grammar/grammar.hpp"

namespace ircheck::grammar {

struct WitnessEvent {
  std::string event;
  Provenance prov;

  bool operator==(const WitnessEvent&) const = default;
};

/// An event trace derivable from a grammar, with per-event source provenance.
using WitnessTrace = std::vector<WitnessEvent>;

/// Shortest terminal string derivable from the start symbol, or nullopt iff
/// the language is empty (decided by the productivity fixpoint). Ties in
/// length break lexicographically on event names, then on provenance.
std::optional<WitnessTrace> shortest_witness(const EventGrammar& g);

} // namespace ircheck::grammar
