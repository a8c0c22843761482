#include "ircheck/grammar/grammar.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ircheck::grammar {

namespace {

std::string body_to_string(const EventGrammar& g, const Production& p) {
  if (p.body.empty())
    return "<eps>";
  std::string out;
  for (const auto& s : p.body) {
    if (!out.empty())
      out += ' ';
    if (s.terminal)
      out += "'" + g.terminals()[s.id] + "'";
    else
      out += g.nonterminal_name(s.id);
  }
  return out;
}

} // namespace

std::string EventGrammar::dump() const {
  std::ostringstream os;
  os << "start: " << nonterminal_name(start_) << '\n';
  for (const auto& p : productions_)
    os << nonterminal_name(p.head) << " -> " << body_to_string(*this, p) << '\n';
  return os.str();
}

std::string EventGrammar::canonical() const {
  std::vector<std::string> lines;
  for (const auto& p : productions_)
    lines.push_back(nonterminal_name(p.head) + " -> " + body_to_string(*this, p));
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::string out = "start: " + nonterminal_name(start_) + "\n";
  for (const auto& l : lines)
    out += l + "\n";
  return out;
}

std::set<std::vector<std::uint32_t>> bounded_strings(const EventGrammar& g,
                                                     std::size_t max_len) {
  using Str = std::vector<std::uint32_t>;
  std::vector<std::set<Str>> derivable(g.num_nonterminals());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions()) {
      // combine per-symbol string sets left to right, pruning at max_len
      std::set<Str> acc = {{}};
      bool dead = false;
      for (const auto& sym : p.body) {
        std::set<Str> next;
        if (sym.terminal) {
          for (const auto& s : acc) {
            if (s.size() + 1 > max_len)
              continue;
            Str t = s;
            t.push_back(sym.id);
            next.insert(std::move(t));
          }
        } else {
          for (const auto& s : acc)
            for (const auto& d : derivable[sym.id]) {
              if (s.size() + d.size() > max_len)
                continue;
              Str t = s;
              t.insert(t.end(), d.begin(), d.end());
              next.insert(std::move(t));
            }
        }
        acc = std::move(next);
        if (acc.empty()) {
          dead = true;
          break;
        }
      }
      if (dead)
        continue;
      for (const auto& s : acc)
        if (derivable[p.head].insert(s).second)
          changed = true;
    }
  }
  return g.num_nonterminals() == 0 ? std::set<Str>{} : derivable[g.start()];
}

std::set<std::string> bounded_strings_text(const EventGrammar& g, std::size_t max_len,
                                           const std::string& sep) {
  std::set<std::string> out;
  for (const auto& s : bounded_strings(g, max_len)) {
    std::string line;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i)
        line += sep;
      line += g.terminals()[s[i]];
    }
    out.insert(line);
  }
  return out;
}

} // namespace ircheck::grammar
