#include "ircheck/grammar/extract.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <stdexcept>

#include "ircheck/errors.hpp"

namespace ircheck::grammar {

namespace {

using graphs::ICFG;
using graphs::IcfgCall;
using graphs::IcfgFunction;
using graphs::IcfgTarget;
using pts::CtxId;

/// One materialized (function, context) grammar instance. In the default
/// context-erased mode the context is always 0.
using InstKey = std::pair<std::string, CtxId>;

struct CallView {
  const IcfgCall* call = nullptr;
  int position = 0; // index among the block's calls
  std::vector<IcfgTarget> targets;
  std::vector<CtxId> target_ctx; // callee context per defined target
};

struct BlockView {
  std::vector<CallView> calls;
};

class Extractor {
public:
  Extractor(const ICFG& icfg, const std::vector<std::string>& alphabet,
            const std::string& entry, const ExtractOptions& opts)
      : icfg_(icfg), entry_(entry), opts_(opts) {
    std::vector<std::string> terms = alphabet;
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    g_ = EventGrammar(std::move(terms));
  }

  EventGrammar run() {
    if (g_.terminals().empty())
      throw std::invalid_argument("extract_grammar: alphabet must be non-empty");
    if (!icfg_.functions.count(entry_))
      throw EntryNotFoundError(entry_);
    discover();
    compute_can_exit();
    emit();
    return std::move(g_);
  }

private:
  bool exempt_truncation(const IcfgTarget& t, const IcfgCall& c) const {
    if (opts_.include_failure_exits)
      return false;
    return t.name == "abort" || c.nonzero_exit_arg;
  }

  CtxId push_ctx(CtxId ctx, const std::string& caller, const IcfgCall& call) const {
    if (!opts_.context_qualified || opts_.state == nullptr)
      return 0;
    const auto& st = *opts_.state;
    auto sid = st.site_id({caller, call.loc.block, call.loc.index});
    if (!sid)
      return 0;
    std::vector<int> s = st.contexts().call_string(ctx);
    if (st.sensitivity() == 0)
      return 0;
    s.push_back(*sid);
    while (static_cast<int>(s.size()) > st.sensitivity())
      s.erase(s.begin());
    auto found = st.contexts().find(s);
    return found ? *found : 0;
  }

  std::vector<IcfgTarget> resolve_targets(const std::string& fname, CtxId ctx,
                                          const IcfgCall& call) const {
    if (!opts_.context_qualified || opts_.state == nullptr)
      return call.targets;
    const auto& st = *opts_.state;
    auto sid = st.site_id({fname, call.loc.block, call.loc.index});
    std::vector<IcfgTarget> out;
    if (!sid)
      return out;
    auto it = st.resolutions().find({*sid, ctx});
    if (it == st.resolutions().end())
      return out;
    for (const auto& name : it->second) {
      IcfgTarget t;
      t.name = name;
      t.defined = icfg_.functions.count(name) > 0;
      t.terminating = !t.defined && icfg_.terminating_externals.count(name) > 0;
      out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void discover() {
    std::deque<InstKey> queue;
    auto want = [&](const InstKey& key) {
      if (insts_.count(key))
        return;
      insts_.emplace(key, std::map<std::string, BlockView>{});
      queue.push_back(key);
    };
    want({entry_, 0});
    while (!queue.empty()) {
      InstKey key = queue.front();
      queue.pop_front();
      const IcfgFunction& f = icfg_.functions.at(key.first);
      auto& blocks = insts_[key];
      for (const auto& [label, calls] : f.calls) {
        BlockView bv;
        int pos = 0;
        for (const auto& call : calls) {
          CallView cv;
          cv.call = &call;
          cv.position = pos++;
          cv.targets = resolve_targets(key.first, key.second, call);
          for (const auto& t : cv.targets) {
            CtxId c2 = t.defined ? push_ctx(key.second, key.first, call) : 0;
            cv.target_ctx.push_back(c2);
            if (t.defined)
              want({t.name, c2});
          }
          bv.calls.push_back(std::move(cv));
        }
        blocks.emplace(label, std::move(bv));
      }
    }
  }

  // Can a path starting at this block (or function) reach an included
  // process-terminating call? Mutual fixpoint across instances.
  void compute_can_exit() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [key, blocks] : insts_) {
        const IcfgFunction& f = icfg_.functions.at(key.first);
        // blocks in reverse CFG order would converge faster; any order works
        for (const auto& label : f.cfg.nodes) {
          bool val = false;
          bool prefix_ok = true;
          auto bit = blocks.find(label);
          if (bit != blocks.end()) {
            for (const auto& cv : bit->second.calls) {
              bool exit_here = false;
              bool passable = false;
              for (std::size_t i = 0; i < cv.targets.size(); ++i) {
                const IcfgTarget& t = cv.targets[i];
                if (t.terminating) {
                  if (!exempt_truncation(t, *cv.call))
                    exit_here = true;
                  continue;
                }
                passable = true;
                if (t.defined && fn_can_exit_[{t.name, cv.target_ctx[i]}])
                  exit_here = true;
              }
              if (prefix_ok && exit_here)
                val = true;
              if (!passable) {
                prefix_ok = false;
                break;
              }
            }
          }
          if (prefix_ok)
            for (const auto& succ : f.cfg.successors(label))
              if (block_can_exit_[{key, succ}])
                val = true;
          auto& slot = block_can_exit_[{key, label}];
          if (val && !slot) {
            slot = true;
            changed = true;
          }
        }
        auto& fslot = fn_can_exit_[key];
        bool fval = block_can_exit_[{key, f.cfg.entry}];
        if (fval && !fslot) {
          fslot = true;
          changed = true;
        }
      }
    }
  }

  std::string ctx_suffix(CtxId ctx) const {
    if (!opts_.context_qualified || opts_.state == nullptr || ctx == 0)
      return {};
    std::string s = "@[";
    const auto& str = opts_.state->contexts().call_string(ctx);
    for (std::size_t i = 0; i < str.size(); ++i) {
      if (i)
        s += ',';
      s += std::to_string(str[i]);
    }
    return s + "]";
  }

  std::uint32_t nt(const std::string& name) { return g_.add_nonterminal(name); }

  std::uint32_t fn_nt(const InstKey& key) {
    return nt("F#" + key.first + ctx_suffix(key.second));
  }
  std::uint32_t fn_exit_nt(const InstKey& key) {
    return nt("XF#" + key.first + ctx_suffix(key.second));
  }
  std::uint32_t block_nt(const InstKey& key, const std::string& label) {
    return nt("N#" + key.first + "." + label + ctx_suffix(key.second));
  }
  std::uint32_t block_exit_nt(const InstKey& key, const std::string& label) {
    return nt("X#" + key.first + "." + label + ctx_suffix(key.second));
  }

  Provenance prov_of(const IcfgFunction& f, const IcfgCall& call) const {
    return {f.file, f.name, call.loc.block, call.loc.index};
  }

  /// Contribution of one target when the call completes and control returns.
  /// Empty optional: this target never completes (terminating external).
  std::optional<std::vector<Symbol>> normal_arm(const InstKey& caller_key,
                                                const IcfgFunction& f, const CallView& cv,
                                                std::size_t i) {
    const IcfgTarget& t = cv.targets[i];
    if (t.terminating)
      return std::nullopt;
    std::vector<Symbol> seq;
    if (auto tid = g_.terminal_id(t.name))
      seq.push_back(Symbol::term(*tid, prov_of(f, *cv.call)));
    if (t.defined)
      seq.push_back(Symbol::nonterm(fn_nt({t.name, cv.target_ctx[i]})));
    (void)caller_key;
    return seq;
  }

  /// Contribution of one target when the process terminates during this call.
  std::optional<std::vector<Symbol>> exit_arm(const IcfgFunction& f, const CallView& cv,
                                              std::size_t i) {
    const IcfgTarget& t = cv.targets[i];
    if (t.terminating) {
      if (exempt_truncation(t, *cv.call))
        return std::nullopt;
      std::vector<Symbol> seq;
      if (auto tid = g_.terminal_id(t.name))
        seq.push_back(Symbol::term(*tid, prov_of(f, *cv.call)));
      return seq;
    }
    if (t.defined && fn_can_exit_[{t.name, cv.target_ctx[i]}]) {
      std::vector<Symbol> seq;
      if (auto tid = g_.terminal_id(t.name))
        seq.push_back(Symbol::term(*tid, prov_of(f, *cv.call)));
      seq.push_back(Symbol::nonterm(fn_exit_nt({t.name, cv.target_ctx[i]})));
      return seq;
    }
    return std::nullopt;
  }

  static bool same_arm(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    if (a.size() != b.size())
      return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].terminal != b[i].terminal || a[i].id != b[i].id || a[i].prov != b[i].prov)
        return false;
    return true;
  }

  static void dedupe_arms(std::vector<std::vector<Symbol>>& arms) {
    std::vector<std::vector<Symbol>> out;
    for (auto& arm : arms) {
      bool dup = false;
      for (const auto& prev : out)
        if (same_arm(prev, arm))
          dup = true;
      if (!dup)
        out.push_back(std::move(arm));
    }
    arms = std::move(out);
  }

  /// Realizes a set of alternative arms as a symbol sequence to append:
  /// single arm inline, several arms behind a fresh alternation nonterminal.
  std::vector<Symbol> realize(std::vector<std::vector<Symbol>> arms, const std::string& name) {
    dedupe_arms(arms);
    assert(!arms.empty());
    if (arms.size() == 1)
      return arms[0];
    std::uint32_t a = nt(name);
    for (auto& arm : arms)
      g_.add_production(a, std::move(arm));
    return {Symbol::nonterm(a)};
  }

  void emit() {
    InstKey entry_key{entry_, 0};
    std::uint32_t start = nt("S");
    g_.set_start(start);
    g_.add_production(start, {Symbol::nonterm(fn_nt(entry_key))});
    if (fn_can_exit_[entry_key])
      g_.add_production(start, {Symbol::nonterm(fn_exit_nt(entry_key))});

    for (const auto& [key, blocks] : insts_) {
      const IcfgFunction& f = icfg_.functions.at(key.first);
      g_.add_production(fn_nt(key), {Symbol::nonterm(block_nt(key, f.cfg.entry))});
      if (fn_can_exit_.at(key))
        g_.add_production(fn_exit_nt(key), {Symbol::nonterm(block_exit_nt(key, f.cfg.entry))});

      for (const auto& label : f.cfg.nodes)
        emit_block(key, f, label, blocks);
    }
  }

  void emit_block(const InstKey& key, const IcfgFunction& f, const std::string& label,
                  const std::map<std::string, BlockView>& blocks) {
    const bool can_exit = block_can_exit_[{key, label}];
    std::vector<Symbol> prefix;
    bool blocked = false;

    auto bit = blocks.find(label);
    if (bit != blocks.end()) {
      for (const auto& cv : bit->second.calls) {
        // exit variant: the process terminates during this call
        std::vector<std::vector<Symbol>> exit_arms;
        for (std::size_t i = 0; i < cv.targets.size(); ++i)
          if (auto arm = exit_arm(f, cv, i))
            exit_arms.push_back(std::move(*arm));
        if (!exit_arms.empty() && can_exit) {
          std::vector<Symbol> body = prefix;
          auto seq = realize(std::move(exit_arms),
                             "E#" + key.first + "." + label + "." +
                                 std::to_string(cv.position) + ctx_suffix(key.second));
          body.insert(body.end(), seq.begin(), seq.end());
          g_.add_production(block_exit_nt(key, label), std::move(body));
        }
        // completion variant: the call returns and the block continues
        std::vector<std::vector<Symbol>> normal_arms;
        for (std::size_t i = 0; i < cv.targets.size(); ++i)
          if (auto arm = normal_arm(key, f, cv, i))
            normal_arms.push_back(std::move(*arm));
        if (normal_arms.empty()) {
          blocked = true;
          break;
        }
        auto seq = realize(std::move(normal_arms),
                           "A#" + key.first + "." + label + "." +
                               std::to_string(cv.position) + ctx_suffix(key.second));
        prefix.insert(prefix.end(), seq.begin(), seq.end());
      }
    }

    if (blocked)
      return;
    if (f.cfg.exits.count(label))
      g_.add_production(block_nt(key, label), prefix);
    for (const auto& succ : f.cfg.successors(label)) {
      std::vector<Symbol> body = prefix;
      body.push_back(Symbol::nonterm(block_nt(key, succ)));
      g_.add_production(block_nt(key, label), std::move(body));
      if (can_exit && block_can_exit_[{key, succ}]) {
        std::vector<Symbol> xbody = prefix;
        xbody.push_back(Symbol::nonterm(block_exit_nt(key, succ)));
        g_.add_production(block_exit_nt(key, label), std::move(xbody));
      }
    }
  }

  const ICFG& icfg_;
  std::string entry_;
  ExtractOptions opts_;
  EventGrammar g_;
  std::map<InstKey, std::map<std::string, BlockView>> insts_;
  std::map<InstKey, bool> fn_can_exit_;
  std::map<std::pair<InstKey, std::string>, bool> block_can_exit_;
};

} // namespace

EventGrammar extract_grammar(const ICFG& icfg, const std::vector<std::string>& alphabet,
                             const std::string& entry, const ExtractOptions& opts) {
  Extractor ex(icfg, alphabet, entry, opts);
  return ex.run();
}

} // namespace ircheck::grammar
