#pragma once

#include <string>
#include <vector>

namespace ircheck::grammar {

/// Total deterministic automaton over event names. A rule property is
/// violated iff the event grammar's language intersects the DFA's language.
struct ViolationDFA {
  std::vector<std::string> alphabet; // sorted event names
  int num_states = 1;
  int start = 0;
  std::vector<char> accepting;          // per state
  std::vector<std::vector<int>> delta;  // [state][symbol]

  int symbol_id(const std::string& event) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == event)
        return static_cast<int>(i);
    return -1;
  }

  int step(int state, int symbol) const { return delta[state][symbol]; }

  bool accepts(const std::vector<std::string>& events) const {
    int s = start;
    for (const auto& e : events) {
      int sym = symbol_id(e);
      if (sym < 0)
        return false; // outside the alphabet: not a word of this automaton
      s = delta[s][sym];
    }
    return accepting[s] != 0;
  }
};

/// Product automaton accepting the intersection of both languages.
/// Alphabets must be identical.
ViolationDFA dfa_intersection(const ViolationDFA& a, const ViolationDFA& b);

} // namespace ircheck::grammar
