#include "ircheck/grammar/witness.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ircheck::grammar {

namespace {

// (length, event names, provenance) lexicographic order
bool better(const WitnessTrace& a, const WitnessTrace& b) {
  if (a.size() != b.size())
    return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].event != b[i].event)
      return a[i].event < b[i].event;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].prov == b[i].prov)
      continue;
    return a[i].prov < b[i].prov;
  }
  return false;
}

} // namespace

std::optional<WitnessTrace> shortest_witness(const EventGrammar& g) {
  const std::size_t n = g.num_nonterminals();
  if (n == 0)
    return std::nullopt;

  std::vector<std::optional<WitnessTrace>> best(n);   // finalized minima
  std::vector<std::optional<WitnessTrace>> cand(n);   // best known candidates
  std::vector<bool> done(n, false);

  // occurrences of each nonterminal in production bodies, and how many
  // unfinalized nonterminal occurrences each production still has
  std::vector<std::vector<std::size_t>> occurrences(n);
  std::vector<int> remaining(g.productions().size(), 0);
  for (std::size_t i = 0; i < g.productions().size(); ++i) {
    for (const auto& s : g.productions()[i].body)
      if (!s.terminal) {
        occurrences[s.id].push_back(i);
        ++remaining[i];
      }
  }

  // priority structure over candidate traces, keyed by (trace, nonterminal)
  auto key_less = [](const std::pair<WitnessTrace, std::size_t>& a,
                     const std::pair<WitnessTrace, std::size_t>& b) {
    if (better(a.first, b.first))
      return true;
    if (better(b.first, a.first))
      return false;
    return a.second < b.second;
  };
  std::set<std::pair<WitnessTrace, std::size_t>, decltype(key_less)> frontier(key_less);

  auto relax = [&](std::size_t pi) {
    const Production& p = g.productions()[pi];
    if (done[p.head])
      return;
    WitnessTrace trace;
    for (const auto& s : p.body) {
      if (s.terminal) {
        trace.push_back({g.terminals()[s.id], s.prov.value_or(Provenance{})});
      } else {
        const WitnessTrace& part = *best[s.id];
        trace.insert(trace.end(), part.begin(), part.end());
      }
    }
    if (!cand[p.head] || better(trace, *cand[p.head])) {
      if (cand[p.head])
        frontier.erase({*cand[p.head], p.head});
      cand[p.head] = trace;
      frontier.insert({std::move(trace), p.head});
    }
  };

  for (std::size_t i = 0; i < g.productions().size(); ++i)
    if (remaining[i] == 0)
      relax(i);

  // Knuth-style extraction: string concatenation is monotone under the
  // (length, lex) order, so finalizing the globally smallest candidate is
  // safe.
  while (!frontier.empty()) {
    auto [trace, v] = *frontier.begin();
    frontier.erase(frontier.begin());
    done[v] = true;
    best[v] = std::move(trace);
    for (std::size_t pi : occurrences[v])
      if (--remaining[pi] == 0)
        relax(pi);
  }

  return best[g.start()] ? std::optional<WitnessTrace>(*best[g.start()]) : std::nullopt;
}

} // namespace ircheck::grammar
