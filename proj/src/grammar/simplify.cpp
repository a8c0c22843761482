#include "ircheck/grammar/simplify.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ircheck::grammar {

namespace {

bool same_symbol(const Symbol& a, const Symbol& b) {
  return a.terminal == b.terminal && a.id == b.id && a.prov == b.prov;
}

bool same_body(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_symbol(a[i], b[i]))
      return false;
  return true;
}

struct Work {
  std::vector<Production> prods;
  std::uint32_t start;
  std::size_t num_nts;

  void dedupe() {
    std::vector<Production> out;
    for (auto& p : prods) {
      bool dup = false;
      for (const auto& q : out)
        if (q.head == p.head && same_body(q.body, p.body))
          dup = true;
      if (!dup)
        out.push_back(std::move(p));
    }
    prods = std::move(out);
  }

  /// Keeps only productions over productive nonterminals.
  void drop_unproductive() {
    std::vector<bool> productive(num_nts, false);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& p : prods) {
        if (productive[p.head])
          continue;
        bool ok = true;
        for (const auto& s : p.body)
          if (!s.terminal && !productive[s.id])
            ok = false;
        if (ok) {
          productive[p.head] = true;
          changed = true;
        }
      }
    }
    std::erase_if(prods, [&](const Production& p) {
      if (!productive[p.head])
        return true;
      for (const auto& s : p.body)
        if (!s.terminal && !productive[s.id])
          return true;
      return false;
    });
  }

  void drop_unreachable() {
    std::vector<bool> reach(num_nts, false);
    reach[start] = true;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& p : prods) {
        if (!reach[p.head])
          continue;
        for (const auto& s : p.body)
          if (!s.terminal && !reach[s.id]) {
            reach[s.id] = true;
            changed = true;
          }
      }
    }
    std::erase_if(prods, [&](const Production& p) { return !reach[p.head]; });
  }

  /// Inlines non-start nonterminals that have exactly one production of body
  /// length <= 1 (covers epsilon-only nonterminals and unit chains).
  bool inline_trivial() {
    std::map<std::uint32_t, std::size_t> counts;
    std::map<std::uint32_t, const std::vector<Symbol>*> only_body;
    for (const auto& p : prods) {
      counts[p.head]++;
      only_body[p.head] = &p.body;
    }
    std::map<std::uint32_t, std::vector<Symbol>> subst;
    for (const auto& [head, n] : counts) {
      if (head == start || n != 1)
        continue;
      const auto& body = *only_body[head];
      if (body.size() > 1)
        continue;
      if (body.size() == 1 && !body[0].terminal && body[0].id == head)
        continue; // self-loop; unproductive, handled elsewhere
      subst[head] = body;
    }
    if (subst.empty())
      return false;
    std::vector<Production> out;
    for (auto& p : prods) {
      if (subst.count(p.head))
        continue; // definition disappears
      std::vector<Symbol> body;
      for (auto& s : p.body) {
        if (!s.terminal) {
          // chase substitution chains (A -> B, B -> c)
          Symbol cur = s;
          std::set<std::uint32_t> seen;
          while (!cur.terminal && subst.count(cur.id) && seen.insert(cur.id).second) {
            const auto& rep = subst[cur.id];
            if (rep.empty()) {
              cur.id = 0xffffffffu; // marks epsilon: drop symbol
              break;
            }
            cur = rep[0];
          }
          if (!cur.terminal && cur.id == 0xffffffffu)
            continue;
          body.push_back(cur);
        } else {
          body.push_back(s);
        }
      }
      out.push_back({p.head, std::move(body)});
    }
    prods = std::move(out);
    return true;
  }
};

} // namespace

EventGrammar simplify_grammar(const EventGrammar& g) {
  Work w;
  w.prods = g.productions();
  w.start = g.start();
  w.num_nts = g.num_nonterminals();

  w.dedupe();
  w.drop_unproductive();
  w.drop_unreachable();
  while (w.inline_trivial()) {
  }
  w.dedupe();

  // rebuild with binarization; nonterminal ids renumber densely
  EventGrammar out(g.terminals());
  std::uint32_t start = out.add_nonterminal(g.nonterminal_name(w.start));
  out.set_start(start);
  std::map<std::string, int> chain_counters;
  for (const auto& p : w.prods) {
    std::uint32_t head = out.add_nonterminal(g.nonterminal_name(p.head));
    std::vector<Symbol> body;
    body.reserve(p.body.size());
    for (const auto& s : p.body)
      body.push_back(s.terminal ? s : Symbol::nonterm(out.add_nonterminal(
                                          g.nonterminal_name(s.id))));
    while (body.size() > 2) {
      // split off the leading symbol: H -> s1 H#i ; H#i -> rest
      const std::string& hname = g.nonterminal_name(p.head);
      int idx = chain_counters[hname]++;
      std::uint32_t link = out.add_nonterminal(hname + "#" + std::to_string(idx));
      out.add_production(head, {body.front(), Symbol::nonterm(link)});
      body.erase(body.begin());
      head = link;
    }
    out.add_production(head, std::move(body));
  }
  return out;
}

} // namespace ircheck::grammar
