#include "ircheck/grammar/dfa.hpp"

#include <cassert>
#include <stdexcept>

namespace ircheck::grammar {

ViolationDFA dfa_intersection(const ViolationDFA& a, const ViolationDFA& b) {
  if (a.alphabet != b.alphabet)
    throw std::invalid_argument("dfa_intersection: alphabets differ");
  ViolationDFA out;
  out.alphabet = a.alphabet;
  out.num_states = a.num_states * b.num_states;
  auto id = [&](int sa, int sb) { return sa * b.num_states + sb; };
  out.start = id(a.start, b.start);
  out.accepting.assign(out.num_states, 0);
  out.delta.assign(out.num_states, std::vector<int>(out.alphabet.size(), 0));
  for (int sa = 0; sa < a.num_states; ++sa)
    for (int sb = 0; sb < b.num_states; ++sb) {
      int s = id(sa, sb);
      out.accepting[s] = a.accepting[sa] && b.accepting[sb];
      for (std::size_t sym = 0; sym < out.alphabet.size(); ++sym)
        out.delta[s][sym] = id(a.delta[sa][sym], b.delta[sb][sym]);
    }
  return out;
}

} // namespace ircheck::grammar
