#include "ircheck/ir/parser.hpp"

#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "ircheck/errors.hpp"

namespace ircheck::ir {

namespace {

enum class Tok {
  Word,     // bare identifier or keyword (i32, define, null, ...)
  LocalId,  // %name
  GlobalId, // @name
  MetaId,   // !name or !{...} contents are not tokenized further
  AttrId,   // #0
  Int,      // 123, -4
  CString,  // c"..." global initializer (verbatim)
  Punct,    // one of ( ) { } [ ] < > , = * : ;
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text; // identifier payload without sigil, punct char, or literal
  std::int64_t value = 0;
  int line = 1;
  int col = 1;
};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$' ||
         c == '-';
}

class Lexer {
public:
  Lexer(std::string_view text, const std::string& file) : text_(text), file_(file) {
    std::size_t line_start = 0;
    for (std::size_t i = 0; i <= text_.size(); ++i) {
      if (i == text_.size() || text_[i] == '\n') {
        lines_.emplace_back(text_.substr(line_start, i - line_start));
        line_start = i + 1;
      }
    }
    run();
  }

  const std::vector<Token>& tokens() const { return tokens_; }

  std::string line_text(int line) const {
    if (line < 1 || line > static_cast<int>(lines_.size()))
      return {};
    return std::string(lines_[line - 1]);
  }

private:
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(file_, line_, col_, what);
  }

  void run() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      if (c == ';') { // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n')
          ++pos_;
        continue;
      }
      start_line_ = line_;
      start_col_ = col_;
      if (c == '%' || c == '@') {
        lex_sigil_ident(c);
        continue;
      }
      if (c == '!') {
        lex_metadata();
        continue;
      }
      if (c == '#') {
        advance(1);
        std::string t = take_ident();
        push(Tok::AttrId, t);
        continue;
      }
      if (c == 'c' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
        lex_cstring();
        continue;
      }
      if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
        lex_number_or_word();
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
        std::string t = take_ident();
        if (t == "...") { // handled by take_ident via '.' chars
        }
        push(Tok::Word, t);
        continue;
      }
      if (std::string("(){}[]<>,=*:").find(c) != std::string::npos) {
        Token tok;
        tok.kind = Tok::Punct;
        tok.text = std::string(1, c);
        tok.line = line_;
        tok.col = col_;
        tokens_.push_back(tok);
        advance(1);
        continue;
      }
      if (c == '"') { // quoted identifier fragment; treat as word
        lex_quoted_word();
        continue;
      }
      fail(std::string("unexpected character '") + c + "'");
    }
    Token eof;
    eof.kind = Tok::Eof;
    eof.line = line_;
    eof.col = col_;
    tokens_.push_back(eof);
  }

  void lex_sigil_ident(char sigil) {
    advance(1);
    std::string name;
    if (pos_ < text_.size() && text_[pos_] == '"') {
      advance(1);
      while (pos_ < text_.size() && text_[pos_] != '"') {
        name += text_[pos_];
        advance(1);
      }
      if (pos_ >= text_.size())
        fail("unterminated quoted identifier");
      advance(1);
    } else {
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        name += text_[pos_];
        advance(1);
      }
    }
    if (name.empty())
      fail("empty identifier after sigil");
    push(sigil == '%' ? Tok::LocalId : Tok::GlobalId, name);
  }

  void lex_metadata() {
    advance(1);
    if (pos_ < text_.size() && text_[pos_] == '{') {
      int depth = 0;
      while (pos_ < text_.size()) {
        if (text_[pos_] == '{')
          ++depth;
        else if (text_[pos_] == '}') {
          --depth;
          if (depth == 0) {
            advance(1);
            break;
          }
        } else if (text_[pos_] == '\n') {
          ++line_;
          col_ = 0;
        }
        advance(1);
      }
      push(Tok::MetaId, "{...}");
      return;
    }
    std::string t = take_ident();
    if (pos_ < text_.size() && text_[pos_] == '"') { // !"literal"
      advance(1);
      while (pos_ < text_.size() && text_[pos_] != '"')
        advance(1);
      if (pos_ < text_.size())
        advance(1);
    }
    push(Tok::MetaId, t);
  }

  void lex_cstring() {
    std::string raw = "c\"";
    advance(2);
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        raw += text_[pos_];
        advance(1);
      }
      raw += text_[pos_];
      advance(1);
    }
    if (pos_ >= text_.size())
      fail("unterminated string constant");
    raw += '"';
    advance(1);
    push(Tok::CString, raw);
  }

  void lex_number_or_word() {
    std::size_t begin = pos_;
    bool neg = text_[pos_] == '-';
    if (neg)
      advance(1);
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("stray '-'");
    }
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      advance(1);
    }
    // Float literals and hex constants are outside the subset; a trailing
    // '.' or 'e' here would have been consumed as identifier characters.
    if (pos_ < text_.size() && is_ident_char(text_[pos_])) {
      while (pos_ < text_.size() && is_ident_char(text_[pos_]))
        advance(1);
      Token tok;
      tok.kind = Tok::Word;
      tok.text = std::string(text_.substr(begin, pos_ - begin));
      tok.line = start_line_;
      tok.col = start_col_;
      tokens_.push_back(tok);
      return;
    }
    Token tok;
    tok.kind = Tok::Int;
    tok.value = neg ? -v : v;
    tok.text = std::string(text_.substr(begin, pos_ - begin));
    tok.line = start_line_;
    tok.col = start_col_;
    tokens_.push_back(tok);
  }

  void lex_quoted_word() {
    advance(1);
    std::string t;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      t += text_[pos_];
      advance(1);
    }
    if (pos_ >= text_.size())
      fail("unterminated quoted token");
    advance(1);
    push(Tok::Word, t);
  }

  std::string take_ident() {
    std::string t;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
      t += text_[pos_];
      advance(1);
    }
    return t;
  }

  void push(Tok kind, std::string text) {
    Token tok;
    tok.kind = kind;
    tok.text = std::move(text);
    tok.line = start_line_;
    tok.col = start_col_;
    tokens_.push_back(std::move(tok));
  }

  void advance(std::size_t n) {
    pos_ += n;
    col_ += static_cast<int>(n);
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int start_line_ = 1;
  int start_col_ = 1;
  std::vector<Token> tokens_;
  std::vector<std::string_view> lines_;
};

const std::set<std::string>& skippable_attr_words() {
  static const std::set<std::string> words = {
      "private",   "internal",      "external",       "linkonce", "linkonce_odr",
      "weak",      "weak_odr",      "common",         "appending", "extern_weak",
      "available_externally",       "dso_local",      "dso_preemptable",
      "hidden",    "default",       "protected",      "unnamed_addr",
      "local_unnamed_addr",         "dllimport",      "dllexport",
      "thread_local",               "zeroext",        "signext",  "inreg",
      "noalias",   "nocapture",     "nest",           "returned", "nonnull",
      "noundef",   "byval",         "sret",           "nounwind", "uwtable",
      "readonly",  "readnone",      "writeonly",      "willreturn",
      "mustprogress",               "norecurse",      "nofree",   "nosync",
      "optnone",   "noinline",      "alwaysinline",   "inlinehint",
      "sanitize_address",           "sanitize_thread","sanitize_memory",
      "speculatable",               "cold",           "hot",      "immarg",
      "nonlazybind",                "naked",          "ssp",      "sspstrong",
      "fastcc",    "coldcc",        "ccc",            "tailcc",
  };
  return words;
}

// Instruction words recognized but outside the analyzed subset; they are
// retained as kind Other.
const std::set<std::string>& other_opcodes() {
  static const std::set<std::string> ops = {
      "add",     "sub",     "mul",      "udiv",       "sdiv",          "urem",
      "srem",    "fadd",    "fsub",     "fmul",       "fdiv",          "frem",
      "fneg",    "shl",     "lshr",     "ashr",       "and",           "or",
      "xor",     "trunc",   "zext",     "sext",       "fptrunc",       "fpext",
      "fptoui",  "fptosi",  "uitofp",   "sitofp",     "ptrtoint",      "inttoptr",
      "fcmp",    "freeze",  "extractvalue",           "insertvalue",
      "extractelement",     "insertelement",          "shufflevector",
      "atomicrmw",          "cmpxchg",  "fence",      "va_arg",        "addrspacecast",
  };
  return ops;
}

const std::set<std::string>& unsupported_terminators() {
  static const std::set<std::string> ops = {
      "switch", "indirectbr", "invoke", "callbr", "resume",
      "unreachable", "cleanupret", "catchret", "catchswitch",
  };
  return ops;
}

const std::set<std::string>& icmp_predicates() {
  static const std::set<std::string> preds = {"eq",  "ne",  "ugt", "uge", "ult",
                                              "ule", "sgt", "sge", "slt", "sle"};
  return preds;
}

struct RawValue {
  ValueRef ref;    // Global vs FunctionRef resolved later
  bool is_global_name = false;
  int line = 0;
  int col = 0;
};

class Parser {
public:
  Parser(const Lexer& lex, std::string file) : lex_(lex), toks_(lex.tokens()), file_(std::move(file)) {}

  Module parse() {
    Module m;
    while (!at(Tok::Eof)) {
      const Token& t = peek();
      if (t.kind == Tok::Word && t.text == "define") {
        m.functions.push_back(parse_define(m));
      } else if (t.kind == Tok::Word && t.text == "declare") {
        m.declarations.push_back(parse_declare());
      } else if (t.kind == Tok::GlobalId) {
        m.globals.push_back(parse_global());
      } else if (t.kind == Tok::Word && (t.text == "source_filename" || t.text == "target")) {
        skip_line(t.line); // module header chatter
      } else if (t.kind == Tok::MetaId) {
        skip_line(t.line);
      } else {
        fail(t, "expected top-level 'define', 'declare', or global definition");
      }
    }
    resolve(m);
    return m;
  }

private:
  // ---- token helpers ----

  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + static_cast<std::size_t>(ahead);
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  const Token& next() {
    const Token& t = peek();
    if (t.kind != Tok::Eof)
      ++pos_;
    return t;
  }

  bool at(Tok kind) const { return peek().kind == kind; }

  bool at_punct(char c) const {
    return peek().kind == Tok::Punct && peek().text[0] == c;
  }

  bool at_word(const char* w) const { return peek().kind == Tok::Word && peek().text == w; }

  bool accept_punct(char c) {
    if (at_punct(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_word(const char* w) {
    if (at_word(w)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_punct(char c, const char* what) {
    if (!accept_punct(c))
      fail(peek(), std::string("expected '") + c + "' " + what);
  }

  std::string expect_word(const char* what) {
    if (!at(Tok::Word))
      fail(peek(), std::string("expected ") + what);
    return next().text;
  }

  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    throw ParseError(file_, t.line, t.col, what);
  }

  void skip_line(int line) {
    while (!at(Tok::Eof) && peek().line == line)
      ++pos_;
  }

  void skip_attr_words() {
    while (true) {
      const Token& t = peek();
      if (t.kind == Tok::Word && skippable_attr_words().count(t.text)) {
        ++pos_;
        continue;
      }
      if (t.kind == Tok::AttrId || t.kind == Tok::MetaId) {
        ++pos_;
        continue;
      }
      break;
    }
  }

  // Skips trailing `, align N`, `, !dbg !7` style suffixes on the same line.
  void skip_instruction_suffixes(int line) {
    while (at_punct(',') && peek().line == line) {
      const Token& after = peek(1);
      if (after.kind == Tok::MetaId) {
        ++pos_; // ','
        while (!at(Tok::Eof) && peek().line == line && peek().kind == Tok::MetaId)
          ++pos_;
        continue;
      }
      if (after.kind == Tok::Word && after.text == "align") {
        pos_ += 2; // ',' 'align'
        if (at(Tok::Int))
          ++pos_;
        continue;
      }
      break;
    }
    while (!at(Tok::Eof) && peek().line == line &&
           (peek().kind == Tok::MetaId || peek().kind == Tok::AttrId))
      ++pos_;
  }

  // ---- types ----

  // Parses a type loosely and returns its canonical spelling. Only function
  // arity/vararg is interpreted elsewhere; here types are token sequences.
  std::string parse_type() {
    std::string out = parse_base_type();
    while (true) {
      if (at_punct('*')) {
        ++pos_;
        out += '*';
        continue;
      }
      if (at_punct('(')) { // function type suffix: ret (params)
        out += " (";
        ++pos_;
        bool first = true;
        while (!at_punct(')')) {
          if (!first)
            out += ", ";
          first = false;
          if (at_word("...")) {
            ++pos_;
            out += "...";
          } else {
            out += parse_type();
          }
          if (!accept_punct(','))
            break;
        }
        expect_punct(')', "to close function type");
        out += ')';
        continue;
      }
      break;
    }
    return out;
  }

  std::string parse_base_type() {
    const Token& t = peek();
    if (t.kind == Tok::Word) {
      ++pos_;
      return t.text;
    }
    if (t.kind == Tok::LocalId) { // named struct type %struct.foo
      ++pos_;
      return "%" + t.text;
    }
    if (t.kind == Tok::Punct && (t.text[0] == '[' || t.text[0] == '<' || t.text[0] == '{')) {
      char open = t.text[0];
      char close = open == '[' ? ']' : (open == '<' ? '>' : '}');
      ++pos_;
      std::string out(1, open);
      if (open == '[' || open == '<') {
        if (!at(Tok::Int))
          fail(peek(), "expected element count in aggregate type");
        out += next().text;
        if (!accept_word("x"))
          fail(peek(), "expected 'x' in aggregate type");
        out += " x ";
        out += parse_type();
      } else {
        bool first = true;
        while (!at_punct(close)) {
          if (!first)
            out += ", ";
          first = false;
          out += parse_type();
          if (!accept_punct(','))
            break;
        }
      }
      if (!accept_punct(close))
        fail(peek(), std::string("expected '") + close + "' to close type");
      out += close;
      return out;
    }
    fail(t, "expected type");
  }

  // ---- values ----

  RawValue parse_value() {
    const Token& t = peek();
    RawValue v;
    v.line = t.line;
    v.col = t.col;
    switch (t.kind) {
    case Tok::LocalId:
      ++pos_;
      v.ref = ValueRef::local(t.text);
      return v;
    case Tok::GlobalId:
      ++pos_;
      v.ref = ValueRef::global(t.text); // reclassified during resolve()
      v.is_global_name = true;
      return v;
    case Tok::Int:
      ++pos_;
      v.ref = ValueRef::const_int(t.value);
      return v;
    case Tok::Word:
      if (t.text == "null") {
        ++pos_;
        v.ref = ValueRef::null();
        return v;
      }
      if (t.text == "undef" || t.text == "poison" || t.text == "zeroinitializer") {
        ++pos_;
        v.ref = ValueRef::undef();
        return v;
      }
      if (t.text == "true") {
        ++pos_;
        v.ref = ValueRef::const_int(1);
        return v;
      }
      if (t.text == "false") {
        ++pos_;
        v.ref = ValueRef::const_int(0);
        return v;
      }
      break;
    default:
      break;
    }
    fail(t, "expected value operand");
  }

  // ---- top-level constructs ----

  GlobalVar parse_global() {
    const Token& name_tok = next(); // GlobalId
    GlobalVar g;
    g.name = name_tok.text;
    expect_punct('=', "after global name");
    skip_attr_words();
    if (accept_word("constant"))
      g.is_constant = true;
    else if (!accept_word("global"))
      fail(peek(), "expected 'global' or 'constant'");
    g.type = parse_type();
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      ++pos_;
      g.init = GlobalVar::Init::Int;
      g.init_int = t.value;
    } else if (t.kind == Tok::CString) {
      ++pos_;
      g.init = GlobalVar::Init::CString;
      g.init_text = t.text;
    } else if (t.kind == Tok::GlobalId) {
      ++pos_;
      g.init = GlobalVar::Init::Ref;
      g.init_ref = t.text;
    } else if (t.kind == Tok::Word && t.text == "zeroinitializer") {
      ++pos_;
      g.init = GlobalVar::Init::Zero;
    } else if (t.kind == Tok::Word && t.text == "null") {
      ++pos_;
      g.init = GlobalVar::Init::Null;
    } else if (t.kind == Tok::Word && t.text == "undef") {
      ++pos_;
      g.init = GlobalVar::Init::Undef;
    } else {
      g.init = GlobalVar::Init::None; // plain declaration-style global
    }
    skip_instruction_suffixes(name_tok.line);
    return g;
  }

  FunctionDecl parse_declare() {
    next(); // 'declare'
    skip_attr_words();
    FunctionDecl d;
    d.return_type = parse_type();
    if (!at(Tok::GlobalId))
      fail(peek(), "expected function name after 'declare'");
    int line = peek().line;
    d.name = next().text;
    expect_punct('(', "to open parameter list");
    while (!at_punct(')')) {
      if (accept_word("...")) {
        d.is_vararg = true;
        break;
      }
      d.param_types.push_back(parse_type());
      skip_attr_words();
      if (at(Tok::LocalId))
        ++pos_; // parameter name in a declaration is legal chatter
      if (!accept_punct(','))
        break;
    }
    expect_punct(')', "to close parameter list");
    // attribute chatter to end of line
    while (!at(Tok::Eof) && peek().line == line &&
           (peek().kind == Tok::AttrId || peek().kind == Tok::MetaId ||
            (peek().kind == Tok::Word && skippable_attr_words().count(peek().text))))
      ++pos_;
    return d;
  }

  Function parse_define(Module& m) {
    next(); // 'define'
    skip_attr_words();
    Function f;
    f.type.return_type = parse_type();
    if (!at(Tok::GlobalId))
      fail(peek(), "expected function name after 'define'");
    f.name = next().text;
    f.source_file = file_;
    expect_punct('(', "to open parameter list");
    int unnamed = 0;
    while (!at_punct(')')) {
      if (accept_word("...")) {
        f.type.is_vararg = true;
        break;
      }
      Param p;
      p.type = parse_type();
      skip_attr_words();
      if (at(Tok::LocalId))
        p.name = next().text;
      else
        p.name = std::to_string(unnamed++);
      f.params.push_back(std::move(p));
      if (!accept_punct(','))
        break;
    }
    expect_punct(')', "to close parameter list");
    f.type.param_count = static_cast<int>(f.params.size());
    while (!at_punct('{')) {
      const Token& t = peek();
      if (t.kind == Tok::AttrId || t.kind == Tok::MetaId ||
          (t.kind == Tok::Word && (skippable_attr_words().count(t.text) || t.text == "align" ||
                                   t.text == "section" || t.text == "comdat")))
        ++pos_;
      else if (t.kind == Tok::Int || t.kind == Tok::CString)
        ++pos_;
      else
        fail(t, "expected '{' to open function body");
    }
    expect_punct('{', "to open function body");
    parse_body(f, m);
    expect_punct('}', "to close function body");
    return f;
  }

  void parse_body(Function& f, Module& m) {
    bool first_block = true;
    while (!at_punct('}')) {
      BasicBlock b;
      if ((peek().kind == Tok::Word || peek().kind == Tok::Int) &&
          peek(1).kind == Tok::Punct && peek(1).text[0] == ':') {
        b.label = peek().text;
        pos_ += 2;
      } else if (first_block) {
        b.label = "entry";
      } else {
        fail(peek(), "expected block label");
      }
      first_block = false;
      parse_block(b, f, m);
      f.blocks.push_back(std::move(b));
    }
    if (f.blocks.empty())
      fail(peek(), "function body must contain at least one block");
  }

  void parse_block(BasicBlock& b, Function& f, Module& m) {
    while (true) {
      const Token& t = peek();
      if (t.kind == Tok::Punct && t.text[0] == '}')
        fail(t, "block is missing a terminator ('br' or 'ret')");
      if (t.kind == Tok::Word && (t.text == "br" || t.text == "ret")) {
        b.terminator = parse_terminator();
        return;
      }
      if (t.kind == Tok::Word && unsupported_terminators().count(t.text)) {
        fail(t, "terminator '" + t.text +
                    "' is outside the supported subset (only 'br' and 'ret')");
      }
      Instruction in = parse_instruction(f, m);
      in.loc.block = b.label;
      in.loc.index = static_cast<int>(b.instructions.size());
      b.instructions.push_back(std::move(in));
    }
  }

  Terminator parse_terminator() {
    Terminator t;
    const Token& kw = next();
    t.line = kw.line;
    if (kw.text == "ret") {
      t.kind = Terminator::Kind::Ret;
      t.type = parse_type();
      if (t.type != "void") {
        RawValue v = parse_value();
        t.value = v.ref;
        note_raw(v);
      }
      skip_instruction_suffixes(kw.line);
      return t;
    }
    // br
    if (accept_word("label")) {
      t.kind = Terminator::Kind::Br;
      t.targets.push_back(expect_local("branch target label"));
      skip_instruction_suffixes(kw.line);
      return t;
    }
    t.kind = Terminator::Kind::CondBr;
    t.type = parse_type();
    RawValue cond = parse_value();
    t.value = cond.ref;
    note_raw(cond);
    expect_punct(',', "after branch condition");
    if (!accept_word("label"))
      fail(peek(), "expected 'label'");
    t.targets.push_back(expect_local("first branch target"));
    expect_punct(',', "between branch targets");
    if (!accept_word("label"))
      fail(peek(), "expected 'label'");
    t.targets.push_back(expect_local("second branch target"));
    skip_instruction_suffixes(kw.line);
    return t;
  }

  std::string expect_local(const char* what) {
    if (!at(Tok::LocalId))
      fail(peek(), std::string("expected ") + what);
    return next().text;
  }

  Instruction parse_instruction(Function& f, Module& m) {
    Instruction in;
    const Token& first = peek();
    in.line = first.line;
    if (first.kind == Tok::LocalId && peek(1).kind == Tok::Punct && peek(1).text[0] == '=') {
      in.result = first.text;
      pos_ += 2;
    }
    // leading call qualifiers
    while (at_word("tail") || at_word("musttail") || at_word("notail"))
      ++pos_;
    const Token& op = peek();
    if (op.kind != Tok::Word)
      fail(op, "expected instruction opcode");
    const std::string& opcode = op.text;

    if (opcode == "alloca")
      return parse_alloca(std::move(in));
    if (opcode == "load")
      return parse_load(std::move(in));
    if (opcode == "store")
      return parse_store(std::move(in));
    if (opcode == "call")
      return parse_call(std::move(in));
    if (opcode == "bitcast")
      return parse_bitcast(std::move(in));
    if (opcode == "getelementptr")
      return parse_gep(std::move(in));
    if (opcode == "phi")
      return parse_phi(std::move(in));
    if (opcode == "select")
      return parse_select(std::move(in));
    if (opcode == "icmp")
      return parse_icmp(std::move(in));
    if (other_opcodes().count(opcode)) {
      // Recognized but pointer-irrelevant: keep the raw line as kind Other.
      in.kind = InstrKind::Other;
      in.aux = trim(lex_.line_text(op.line));
      m.diagnostics.push_back({"instruction '" + opcode + "' is outside the analyzed subset; "
                               "retained without pointer semantics",
                               f.name, in.loc, op.line});
      skip_line(op.line);
      return in;
    }
    fail(op, "unrecognized instruction '" + opcode + "'");
  }

  static std::string trim(std::string s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos)
      return {};
    return s.substr(a, b - a + 1);
  }

  Instruction parse_alloca(Instruction in) {
    int line = next().line; // 'alloca'
    in.kind = InstrKind::Alloca;
    in.types.push_back(parse_type());
    if (at_punct(',') && peek(1).kind != Tok::MetaId &&
        !(peek(1).kind == Tok::Word && peek(1).text == "align")) {
      ++pos_; // element-count form: alloca T, T2 N
      in.types.push_back(parse_type());
      RawValue count = parse_value();
      in.operands.push_back(count.ref);
      note_raw(count);
    }
    skip_instruction_suffixes(line);
    return in;
  }

  Instruction parse_load(Instruction in) {
    int line = next().line; // 'load'
    in.kind = InstrKind::Load;
    accept_word("volatile");
    std::string ty = parse_type();
    if (accept_punct(',')) { // modern form: load T, T* ptr
      in.types.push_back(ty);
      in.types.push_back(parse_type());
    } else { // legacy form: load T* ptr — normalize to the two-type shape
      in.types.push_back(strip_pointer(ty));
      in.types.push_back(ty);
    }
    RawValue ptr = parse_value();
    in.operands.push_back(ptr.ref);
    note_raw(ptr);
    skip_instruction_suffixes(line);
    return in;
  }

  Instruction parse_store(Instruction in) {
    int line = next().line; // 'store'
    in.kind = InstrKind::Store;
    accept_word("volatile");
    in.types.push_back(parse_type());
    RawValue val = parse_value();
    in.operands.push_back(val.ref);
    note_raw(val);
    expect_punct(',', "between stored value and pointer");
    in.types.push_back(parse_type());
    RawValue ptr = parse_value();
    in.operands.push_back(ptr.ref);
    note_raw(ptr);
    skip_instruction_suffixes(line);
    return in;
  }

  Instruction parse_call(Instruction in) {
    int line = next().line; // 'call'
    skip_attr_words();
    std::string ret_ty = parse_type();
    in.types.push_back(ret_ty);
    // `call T (argtys) @f(...)` spells a full function type before the callee
    if (at_punct('(') && !at(Tok::Eof)) {
      // distinguish function-type parens from the argument list: the callee
      // symbol has not been seen yet, so parens here must be the type
      std::string fn_part = "(";
      ++pos_;
      bool first = true;
      while (!at_punct(')')) {
        if (!first)
          fn_part += ", ";
        first = false;
        if (accept_word("..."))
          fn_part += "...";
        else
          fn_part += parse_type();
        if (!accept_punct(','))
          break;
      }
      expect_punct(')', "to close function type");
      in.types[0] = ret_ty + " " + fn_part + ")";
    }
    const Token& callee = peek();
    if (callee.kind == Tok::GlobalId) {
      in.kind = InstrKind::CallDirect;
      ++pos_;
      in.operands.push_back(ValueRef::function(callee.text));
    } else if (callee.kind == Tok::LocalId) {
      in.kind = InstrKind::CallIndirect;
      ++pos_;
      in.operands.push_back(ValueRef::local(callee.text));
    } else {
      fail(callee, "expected '@function' or '%register' callee");
    }
    expect_punct('(', "to open call arguments");
    while (!at_punct(')')) {
      in.types.push_back(parse_type());
      skip_attr_words();
      RawValue arg = parse_value();
      in.operands.push_back(arg.ref);
      note_raw(arg);
      if (!accept_punct(','))
        break;
    }
    expect_punct(')', "to close call arguments");
    skip_attr_words();
    skip_instruction_suffixes(line);
    return in;
  }

  Instruction parse_bitcast(Instruction in) {
    int line = next().line;
    in.kind = InstrKind::Bitcast;
    in.types.push_back(parse_type());
    RawValue src = parse_value();
    in.operands.push_back(src.ref);
    note_raw(src);
    if (!accept_word("to"))
      fail(peek(), "expected 'to' in bitcast");
    in.types.push_back(parse_type());
    skip_instruction_suffixes(line);
    return in;
  }

  Instruction parse_gep(Instruction in) {
    int line = next().line;
    in.kind = InstrKind::Gep;
    if (accept_word("inbounds"))
      in.aux = "inbounds";
    std::string first_ty = parse_type();
    if (accept_punct(',')) { // modern: gep T, T* base, idx...
      in.types.push_back(first_ty);
      in.types.push_back(parse_type());
    } else { // legacy: gep T* base, idx...
      in.types.push_back(strip_pointer(first_ty));
      in.types.push_back(first_ty);
    }
    RawValue base = parse_value();
    in.operands.push_back(base.ref);
    note_raw(base);
    while (at_punct(',')) {
      if (peek(1).kind == Tok::MetaId || (peek(1).kind == Tok::Word && peek(1).text == "align"))
        break;
      ++pos_;
      accept_word("inrange");
      in.types.push_back(parse_type());
      RawValue idx = parse_value();
      in.operands.push_back(idx.ref);
      note_raw(idx);
    }
    skip_instruction_suffixes(line);
    return in;
  }

  Instruction parse_phi(Instruction in) {
    int line = next().line;
    in.kind = InstrKind::Phi;
    in.types.push_back(parse_type());
    while (true) {
      expect_punct('[', "to open phi incoming pair");
      RawValue v = parse_value();
      in.operands.push_back(v.ref);
      note_raw(v);
      expect_punct(',', "inside phi incoming pair");
      in.phi_labels.push_back(expect_local("phi incoming block label"));
      expect_punct(']', "to close phi incoming pair");
      if (!accept_punct(','))
        break;
    }
    skip_instruction_suffixes(line);
    return in;
  }

  Instruction parse_select(Instruction in) {
    int line = next().line;
    in.kind = InstrKind::Select;
    in.types.push_back(parse_type());
    RawValue cond = parse_value();
    in.operands.push_back(cond.ref);
    note_raw(cond);
    expect_punct(',', "after select condition");
    in.types.push_back(parse_type());
    RawValue a = parse_value();
    in.operands.push_back(a.ref);
    note_raw(a);
    expect_punct(',', "between select operands");
    in.types.push_back(parse_type());
    RawValue b = parse_value();
    in.operands.push_back(b.ref);
    note_raw(b);
    skip_instruction_suffixes(line);
    return in;
  }

  Instruction parse_icmp(Instruction in) {
    int line = next().line;
    in.kind = InstrKind::Icmp;
    std::string pred = expect_word("icmp predicate");
    if (!icmp_predicates().count(pred))
      fail(peek(), "unknown icmp predicate '" + pred + "'");
    in.aux = pred;
    in.types.push_back(parse_type());
    RawValue a = parse_value();
    in.operands.push_back(a.ref);
    note_raw(a);
    expect_punct(',', "between icmp operands");
    RawValue b = parse_value();
    in.operands.push_back(b.ref);
    note_raw(b);
    skip_instruction_suffixes(line);
    return in;
  }

  static std::string strip_pointer(const std::string& ty) {
    if (!ty.empty() && ty.back() == '*')
      return ty.substr(0, ty.size() - 1);
    return ty;
  }

  void note_raw(const RawValue& v) {
    if (v.is_global_name)
      global_uses_.push_back({v.ref.name, v.line, v.col});
  }

  // ---- post-parse resolution and validation ----

  struct GlobalUse {
    std::string name;
    int line;
    int col;
  };

  void resolve(Module& m) {
    std::unordered_map<std::string, int> seen;
    for (const auto& f : m.functions)
      check_duplicate(seen, f.name, "function");
    for (const auto& d : m.declarations)
      check_duplicate(seen, d.name, "function");
    for (const auto& g : m.globals)
      check_duplicate(seen, g.name, "global");

    for (const auto& g : m.globals) {
      if (g.init == GlobalVar::Init::Ref && !m.is_function_name(g.init_ref) &&
          m.find_global(g.init_ref) == nullptr)
        throw ParseError(file_, 1, 1,
                         "global '" + g.name + "' references undefined symbol '@" +
                             g.init_ref + "'");
    }

    for (auto& f : m.functions)
      resolve_function(m, f);
  }

  void check_duplicate(std::unordered_map<std::string, int>& seen, const std::string& name,
                       const char* what) {
    auto [it, fresh] = seen.emplace(name, 1);
    (void)what;
    if (!fresh)
      throw DuplicateSymbolError(file_, 1, 1, name);
  }

  void resolve_function(Module& m, Function& f) {
    std::unordered_set<std::string> labels;
    for (const auto& b : f.blocks) {
      if (!labels.insert(b.label).second)
        throw ParseError(file_, b.terminator.line, 1,
                         "duplicate block label '%" + b.label + "' in @" + f.name);
    }
    std::unordered_set<std::string> registers;
    for (const auto& p : f.params)
      registers.insert(p.name);
    for (const auto& b : f.blocks)
      for (const auto& in : b.instructions)
        if (in.result)
          registers.insert(*in.result);

    auto check_value = [&](ValueRef& v, int line) {
      if (v.kind == ValueKind::Local) {
        if (!registers.count(v.name))
          throw ParseError(file_, line, 1,
                           "undefined register '%" + v.name + "' in @" + f.name);
      } else if (v.kind == ValueKind::Global || v.kind == ValueKind::FunctionRef) {
        if (m.is_function_name(v.name))
          v.kind = ValueKind::FunctionRef;
        else if (m.find_global(v.name) != nullptr)
          v.kind = ValueKind::Global;
        else
          throw ParseError(file_, line, 1,
                           "undefined symbol '@" + v.name + "' in @" + f.name);
      }
    };

    for (auto& b : f.blocks) {
      for (auto& in : b.instructions) {
        for (auto& opnd : in.operands)
          check_value(opnd, in.line);
        if (in.kind == InstrKind::CallDirect &&
            in.operands[0].kind != ValueKind::FunctionRef)
          throw ParseError(file_, in.line, 1,
                           "direct call to '@" + in.operands[0].name +
                               "' which is not a declared or defined function");
        if (in.kind == InstrKind::Phi) {
          for (const auto& lbl : in.phi_labels)
            if (!labels.count(lbl))
              throw ParseError(file_, in.line, 1,
                               "phi references undefined label '%" + lbl + "'");
        }
      }
      if (b.terminator.value)
        check_value(*b.terminator.value, b.terminator.line);
      for (const auto& target : b.terminator.targets)
        if (!labels.count(target))
          throw ParseError(file_, b.terminator.line, 1,
                           "branch to undefined label '%" + target + "' in @" + f.name);
    }
  }

  const Lexer& lex_;
  const std::vector<Token>& toks_;
  std::string file_;
  std::size_t pos_ = 0;
  std::vector<GlobalUse> global_uses_;
};

} // namespace

Module parse_module(std::string_view text, const std::string& source_name,
                    const ParseOptions& opts) {
  if (text.size() > opts.max_input_bytes)
    throw ParseError(source_name, 1, 1,
                     "input exceeds configured size limit (" +
                         std::to_string(opts.max_input_bytes) + " bytes)");
  Lexer lex(text, source_name);
  Parser parser(lex, source_name);
  return parser.parse();
}

Module link_modules(std::vector<Module> parts) {
  Module out;
  std::unordered_map<std::string, bool> defined; // name -> is definition
  for (auto& part : parts) {
    for (auto& f : part.functions) {
      auto it = defined.find(f.name);
      if (it != defined.end() && it->second)
        throw DuplicateSymbolError(f.source_file, 1, 1, f.name);
      if (it != defined.end() && !it->second) {
        // definition supersedes an earlier declaration
        std::erase_if(out.declarations,
                      [&](const FunctionDecl& d) { return d.name == f.name; });
      }
      defined[f.name] = true;
      out.functions.push_back(std::move(f));
    }
    for (auto& d : part.declarations) {
      auto it = defined.find(d.name);
      if (it != defined.end())
        continue; // already defined or declared
      defined[d.name] = false;
      out.declarations.push_back(std::move(d));
    }
    for (auto& g : part.globals) {
      if (out.find_global(g.name) != nullptr)
        throw DuplicateSymbolError("<link>", 1, 1, g.name);
      if (defined.count(g.name))
        throw DuplicateSymbolError("<link>", 1, 1, g.name);
      out.globals.push_back(std::move(g));
    }
    for (auto& diag : part.diagnostics)
      out.diagnostics.push_back(std::move(diag));
  }
  // cross-check: linked symbol table must still resolve every reference
  for (const auto& g : out.globals)
    if (defined.count(g.name))
      throw DuplicateSymbolError("<link>", 1, 1, g.name);
  return out;
}

} // namespace ircheck::ir
