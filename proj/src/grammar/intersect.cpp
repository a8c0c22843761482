#include "ircheck/grammar/intersect.hpp"

#include <deque>
#include <map>
#include <stdexcept>

namespace ircheck::grammar {

EventGrammar intersect(const EventGrammar& g, const ViolationDFA& a) {
  // terminal id in g -> symbol id in the automaton
  std::vector<int> sym_of(g.terminals().size(), -1);
  for (std::size_t t = 0; t < g.terminals().size(); ++t) {
    sym_of[t] = a.symbol_id(g.terminals()[t]);
    if (sym_of[t] < 0)
      throw std::invalid_argument("intersect: automaton is not total over the grammar "
                                  "alphabet (missing '" + g.terminals()[t] + "')");
  }
  for (const auto& p : g.productions())
    if (p.body.size() > 2)
      throw std::invalid_argument("intersect: grammar must be binarized first");

  // productions indexed by head
  std::map<std::uint32_t, std::vector<const Production*>> by_head;
  for (const auto& p : g.productions())
    by_head[p.head].push_back(&p);

  EventGrammar out(g.terminals());
  auto triple_name = [&](int q, std::uint32_t nt, int q2) {
    return "(" + std::to_string(q) + "," + g.nonterminal_name(nt) + "," + std::to_string(q2) +
           ")";
  };

  std::map<std::tuple<int, std::uint32_t, int>, std::uint32_t> ids;
  std::deque<std::tuple<int, std::uint32_t, int>> queue;
  auto want = [&](int q, std::uint32_t nt, int q2) {
    auto key = std::make_tuple(q, nt, q2);
    auto it = ids.find(key);
    if (it != ids.end())
      return it->second;
    std::uint32_t id = out.add_nonterminal(triple_name(q, nt, q2));
    ids.emplace(key, id);
    queue.push_back(key);
    return id;
  };

  std::uint32_t start = out.add_nonterminal("S!");
  out.set_start(start);
  for (int qf = 0; qf < a.num_states; ++qf)
    if (a.accepting[qf])
      out.add_production(start, {Symbol::nonterm(want(a.start, g.start(), qf))});

  while (!queue.empty()) {
    auto [q, nt, q2] = queue.front();
    queue.pop_front();
    std::uint32_t head = ids.at({q, nt, q2});
    auto it = by_head.find(nt);
    if (it == by_head.end())
      continue;
    for (const Production* p : it->second) {
      if (p->body.empty()) {
        if (q == q2)
          out.add_production(head, {});
        continue;
      }
      if (p->body.size() == 1) {
        const Symbol& s = p->body[0];
        if (s.terminal) {
          if (a.step(q, sym_of[s.id]) == q2)
            out.add_production(head, {s});
        } else {
          out.add_production(head, {Symbol::nonterm(want(q, s.id, q2))});
        }
        continue;
      }
      const Symbol& s1 = p->body[0];
      const Symbol& s2 = p->body[1];
      std::vector<int> mids;
      if (s1.terminal)
        mids.push_back(a.step(q, sym_of[s1.id]));
      else
        for (int m = 0; m < a.num_states; ++m)
          mids.push_back(m);
      for (int m : mids) {
        if (s2.terminal) {
          if (a.step(m, sym_of[s2.id]) != q2)
            continue;
          Symbol first = s1.terminal ? s1 : Symbol::nonterm(want(q, s1.id, m));
          out.add_production(head, {first, s2});
        } else {
          Symbol first = s1.terminal ? s1 : Symbol::nonterm(want(q, s1.id, m));
          out.add_production(head, {first, Symbol::nonterm(want(m, s2.id, q2))});
        }
      }
    }
  }
  return out;
}

} // namespace ircheck::grammar
