#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ircheck/support.hpp"

namespace ircheck::grammar {

/// Source position of the call instruction that produced a terminal.
struct Provenance {
  std::string file;
  std::string function;
  std::string block;
  int index = 0;

  bool operator==(const Provenance&) const = default;
  bool operator<(const Provenance& o) const {
    return std::tie(function, block, index, file) <
           std::tie(o.function, o.block, o.index, o.file);
  }
};

struct Symbol {
  bool terminal = false;
  std::uint32_t id = 0;
  std::optional<Provenance> prov; // terminals only

  static Symbol term(std::uint32_t id, Provenance p) { return {true, id, std::move(p)}; }
  static Symbol nonterm(std::uint32_t id) { return {false, id, std::nullopt}; }
};

struct Production {
  std::uint32_t head = 0;
  std::vector<Symbol> body;
};

/// Context-free grammar over rule-relevant call events. The terminal strings
/// derivable from `start` over-approximate the event traces of the program's
/// terminating paths.
class EventGrammar {
public:
  EventGrammar() = default;
  explicit EventGrammar(std::vector<std::string> terminals)
      : terminals_(std::move(terminals)) {}

  const std::vector<std::string>& terminals() const { return terminals_; }
  std::optional<std::uint32_t> terminal_id(const std::string& name) const {
    for (std::uint32_t i = 0; i < terminals_.size(); ++i)
      if (terminals_[i] == name)
        return i;
    return std::nullopt;
  }

  std::uint32_t add_nonterminal(const std::string& name) { return nts_.intern(name); }
  const std::string& nonterminal_name(std::uint32_t id) const { return nts_.name(id); }
  std::size_t num_nonterminals() const { return nts_.size(); }

  void add_production(std::uint32_t head, std::vector<Symbol> body) {
    productions_.push_back({head, std::move(body)});
  }

  const std::vector<Production>& productions() const { return productions_; }
  std::vector<Production>& productions() { return productions_; }

  void set_start(std::uint32_t s) { start_ = s; }
  std::uint32_t start() const { return start_; }

  /// Plain-text production dump, one production per line:
  ///   Head -> sym sym ... | Head -> <eps>
  /// Terminals are quoted. The start symbol is listed first.
  std::string dump() const;

  /// Deterministic canonical form (sorted productions, by name); two grammars
  /// with equal canonical forms derive the same language via identical rules.
  std::string canonical() const;

private:
  std::vector<std::string> terminals_;
  StringInterner nts_;
  std::vector<Production> productions_;
  std::uint32_t start_ = 0;
};

/// All terminal strings of length <= max_len derivable from the start symbol,
/// as vectors of terminal ids. Exponential in the worst case; intended for
/// small oracle grammars.
std::set<std::vector<std::uint32_t>> bounded_strings(const EventGrammar& g,
                                                     std::size_t max_len);

/// Convenience: bounded_strings rendered as event-name sequences joined with
/// a separator (empty string for the empty word).
std::set<std::string> bounded_strings_text(const EventGrammar& g, std::size_t max_len,
                                           const std::string& sep = ".");

} // namespace ircheck::grammar
