#include "beliefreg/parser.hpp"

#include "parser_detail.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

namespace beliefreg {

namespace detail {

namespace {

struct Alias {
  std::string_view utf8;
  std::string_view text;
  TokKind kind;
};

constexpr std::array<Alias, 11> kUnicodeAliases{{
    {"\xE2\x88\x92", "-", TokKind::Punct},        // −
    {"\xC3\x97", "*", TokKind::Punct},            // ×
    {"\xC3\xB7", "/", TokKind::Punct},            // ÷
    {"\xE2\x89\xA4", "<=", TokKind::Punct},       // ≤
    {"\xE2\x89\xA5", ">=", TokKind::Punct},       // ≥
    {"\xE2\x89\xA0", "!=", TokKind::Punct},       // ≠
    {"\xC2\xAC", "not", TokKind::Ident},          // ¬
    {"\xE2\x88\xA7", "and", TokKind::Ident},      // ∧
    {"\xE2\x88\xA8", "or", TokKind::Ident},       // ∨
    {"\xE2\x88\x83", "exists", TokKind::Ident},   // ∃
    {"\xE2\x8A\x83", "implies", TokKind::Ident},  // ⊃
}};

constexpr std::array<std::string_view, 13> kPuncts{":=", "<=", ">=", "!=", "==", "->", "&&",
                                                   "(",  ")",  "[",  "]",  "{",  "}"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t line_start = 0;
  bool line_has_token = false;
  std::size_t i = 0;
  auto push = [&](TokKind kind, std::string text, std::size_t start) {
    Token tok{kind, std::move(text),
              SourcePos{line, static_cast<int>(start - line_start) + 1}, !line_has_token};
    line_has_token = true;
    out.push_back(std::move(tok));
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      line_start = ++i;
      line_has_token = false;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < src.size() && ident_char(src[i])) ++i;
      push(TokKind::Ident, std::string(src.substr(start, i - start)), start);
      continue;
    }
    if (digit(c) || (c == '.' && i + 1 < src.size() && digit(src[i + 1]))) {
      bool plain_integer = true;
      while (i < src.size() && digit(src[i])) ++i;
      if (i < src.size() && src[i] == '.') {
        plain_integer = false;
        ++i;
        while (i < src.size() && digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && digit(src[j])) {
          plain_integer = false;
          i = j;
          while (i < src.size() && digit(src[i])) ++i;
        }
      }
      // "1/3" written without spaces is one rational literal.
      if (plain_integer && i + 1 < src.size() && src[i] == '/' && digit(src[i + 1])) {
        ++i;
        while (i < src.size() && digit(src[i])) ++i;
      }
      push(TokKind::Number, std::string(src.substr(start, i - start)), start);
      continue;
    }
    bool matched = false;
    for (const auto& alias : kUnicodeAliases) {
      if (src.substr(i, alias.utf8.size()) == alias.utf8) {
        push(alias.kind, std::string(alias.text), start);
        i += alias.utf8.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (std::string_view p : kPuncts) {
      if (src.substr(i, p.size()) == p) {
        std::string text(p);
        TokKind kind = TokKind::Punct;
        if (p == "==") text = "=";
        if (p == "->") {
          text = "implies";
          kind = TokKind::Ident;
        }
        if (p == "&&") {
          text = "and";
          kind = TokKind::Ident;
        }
        push(kind, std::move(text), start);
        i += p.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("+-*/^=<>,;:.|!").find(c) != std::string_view::npos) {
      if (c == '!') {
        push(TokKind::Ident, "not", start);
      } else {
        push(TokKind::Punct, std::string(1, c), start);
      }
      ++i;
      continue;
    }
    std::size_t len = 1;
    while (start + len < src.size() && (static_cast<unsigned char>(src[start + len]) & 0xC0) == 0x80) {
      ++len;
    }
    throw ParseError({Diagnostic{SourcePos{line, static_cast<int>(start - line_start) + 1},
                                 "unexpected character '" +
                                     std::string(src.substr(start, len)) + "'"}});
  }
  Token end{TokKind::End, "", SourcePos{line, static_cast<int>(i - line_start) + 1}, false};
  out.push_back(end);
  return out;
}

Number literal_value(const Token& tok) {
  auto r = parse_rational(tok.text);
  if (!r) throw SyntaxError{tok.pos, "malformed number '" + tok.text + "'"};
  return Number(*r);
}

namespace {

bool is_relation(const Token& t) {
  if (t.kind != TokKind::Punct) return false;
  return t.text == "=" || t.text == "!=" || t.text == "<" || t.text == "<=" || t.text == ">" ||
         t.text == ">=";
}

Rel relation_of(const std::string& s) {
  if (s == "=") return Rel::Eq;
  if (s == "!=") return Rel::Ne;
  if (s == "<") return Rel::Lt;
  if (s == "<=") return Rel::Le;
  if (s == ">") return Rel::Gt;
  return Rel::Ge;
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words{
      "and", "or",  "not",  "exists", "implies", "if",    "then", "else", "true",
      "false", "now", "S0", "do",     "poss",    "pi",    "min",  "max",  "abs",
      "exp",  "gauss", "pow", "Bel"};
  return words;
}

}  // namespace

ExprParser::ExprParser(const std::vector<Token>& tokens, const Scope& scope)
    : tokens_(tokens), scope_(scope) {}

const Token& ExprParser::peek(std::size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

const Token& ExprParser::next() {
  const Token& t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool ExprParser::at(std::string_view text) const {
  const Token& t = peek();
  return t.kind != TokKind::End && t.kind != TokKind::Number && t.text == text;
}

bool ExprParser::accept(std::string_view text) {
  if (!at(text)) return false;
  next();
  return true;
}

const Token& ExprParser::expect(std::string_view text) {
  if (!at(text)) {
    fail("expected '" + std::string(text) + "'");
  }
  return next();
}

std::string ExprParser::expect_ident() {
  const Token& t = peek();
  if (t.kind != TokKind::Ident) fail("expected an identifier");
  return next().text;
}

void ExprParser::fail(const std::string& message) const { fail_at(peek(), message); }

void ExprParser::fail_at(const Token& tok, const std::string& message) const {
  std::string found = tok.kind == TokKind::End ? "end of input" : "'" + tok.text + "'";
  throw SyntaxError{tok.pos, message + ", found " + found};
}

bool ExprParser::is_bound(const std::string& name) const {
  return std::find(bound_.begin(), bound_.end(), name) != bound_.end();
}

// Terms ----------------------------------------------------------------------

Term ExprParser::term() { return sum(); }

Term ExprParser::sum() {
  Term lhs = product();
  while (peek().kind == TokKind::Punct && (at("+") || at("-"))) {
    const bool plus = next().text == "+";
    Term rhs = product();
    lhs = apply(plus ? Op::Add : Op::Sub, {lhs, rhs});
  }
  return lhs;
}

Term ExprParser::product() {
  Term lhs = unary();
  while (peek().kind == TokKind::Punct && (at("*") || at("/"))) {
    const bool times = next().text == "*";
    Term rhs = unary();
    lhs = apply(times ? Op::Mul : Op::Div, {lhs, rhs});
  }
  return lhs;
}

Term ExprParser::unary() {
  if (peek().kind == TokKind::Punct && at("-")) {
    next();
    if (peek().kind == TokKind::Number) {
      Term literal = constant(-literal_value(next()));
      return power(literal);
    }
    return apply(Op::Neg, {unary()});
  }
  return power(primary());
}

Term ExprParser::power(Term base) {
  if (peek().kind == TokKind::Punct && at("^")) {
    next();
    return apply(Op::Pow, {base, unary()});
  }
  return base;
}

std::vector<Term> ExprParser::call_args() {
  std::vector<Term> args;
  expect("(");
  if (!at(")")) {
    do {
      args.push_back(term());
    } while (accept(","));
  }
  expect(")");
  return args;
}

Term ExprParser::primary() {
  const Token& tok = peek();
  if (tok.kind == TokKind::Number) return constant(literal_value(next()));
  if (tok.kind == TokKind::Punct && tok.text == "(") {
    next();
    Term inner = term();
    expect(")");
    return inner;
  }
  if (tok.kind == TokKind::Punct && tok.text == "|") {
    next();
    Term inner = term();
    expect("|");
    return apply(Op::Abs, {inner});
  }
  if (tok.kind == TokKind::Ident) return identifier_term(next());
  fail("expected a term");
}

Term ExprParser::identifier_term(const Token& tok) {
  const std::string& name = tok.text;
  const bool call = at("(");
  if (name == "if") {
    Formula guard = formula();
    expect("then");
    Term then_term = term();
    expect("else");
    Term else_term = term();
    return ite(guard, then_term, else_term);
  }
  if (name == "pi") return apply(Op::Pi, {});
  if (name == "Bel") fail_at(tok, "belief operator cannot appear inside a query or theory term");
  static const std::pair<std::string_view, Op> kBuiltins[] = {
      {"min", Op::Min}, {"max", Op::Max},     {"abs", Op::Abs}, {"exp", Op::Exp},
      {"pow", Op::Pow}, {"gauss", Op::Gauss}, {"power", Op::Pow}};
  for (const auto& [fname, op] : kBuiltins) {
    if (name != fname) continue;
    if (!call) fail_at(tok, "builtin '" + name + "' needs arguments");
    std::vector<Term> args = call_args();
    if (args.size() != op_arity(op)) {
      throw SyntaxError{tok.pos, "'" + name + "' takes " + std::to_string(op_arity(op)) +
                                     " arguments, got " + std::to_string(args.size())};
    }
    return apply(op, std::move(args));
  }
  if (is_bound(name) || scope_.variables.contains(name)) {
    if (call) fail_at(tok, "variable '" + name + "' cannot be applied");
    return var(name);
  }
  if (scope_.fluents.contains(name)) {
    if (action_arg_depth_ > 0) fail_at(tok, "action arguments must be ground, not fluent '" + name + "'");
    if (!call) return fluent(name);
    expect("(");
    SitTerm s = sit_term();
    expect(")");
    return fluent(name, std::move(s));
  }
  if (reserved_words().contains(name)) fail_at(tok, "unexpected keyword '" + name + "'");
  if (action_arg_depth_ > 0 && !call) return symbol(name);
  if (scope_.free_identifiers_are_variables && !call) return var(name);
  if (call) throw SyntaxError{tok.pos, "unknown function or fluent '" + name + "'"};
  throw SyntaxError{tok.pos, "unknown identifier '" + name + "'"};
}

Term ExprParser::action_term() {
  const Token& tok = peek();
  if (tok.kind != TokKind::Ident || reserved_words().contains(tok.text)) {
    fail("expected an action");
  }
  std::string name = next().text;
  std::vector<Term> args;
  if (at("(")) {
    ++action_arg_depth_;
    try {
      args = call_args();
    } catch (...) {
      --action_arg_depth_;
      throw;
    }
    --action_arg_depth_;
  }
  return action(std::move(name), std::move(args));
}

SitTerm ExprParser::sit_term() {
  if (accept("now")) return SitTerm{SitBase::Now, {}};
  if (accept("S0")) return SitTerm{SitBase::S0, {}};
  if (!accept("do")) fail("expected a situation (now, S0 or do(...))");
  expect("(");
  std::vector<Term> actions;
  if (accept("[")) {
    if (!at("]")) {
      do {
        actions.push_back(action_term());
      } while (accept(","));
    }
    expect("]");
  } else {
    actions.push_back(action_term());
  }
  expect(",");
  SitTerm inner = sit_term();
  expect(")");
  inner.actions.insert(inner.actions.end(), actions.begin(), actions.end());
  return inner;
}

// Formulas -------------------------------------------------------------------

Formula ExprParser::formula() {
  Formula lhs = disjunction();
  if (accept("implies")) return implies(lhs, formula());
  return lhs;
}

Formula ExprParser::disjunction() {
  std::vector<Formula> parts{conjunction()};
  while (accept("or")) parts.push_back(conjunction());
  return disj(std::move(parts));
}

Formula ExprParser::conjunction() {
  std::vector<Formula> parts{unary_formula()};
  while (accept("and")) parts.push_back(unary_formula());
  return conj(std::move(parts));
}

Formula ExprParser::unary_formula() {
  if (accept("not")) return negate(unary_formula());
  if (accept("true")) return truth(true);
  if (accept("false")) return truth(false);
  if (accept("exists")) {
    const Token& tok = peek();
    std::string name = expect_ident();
    if (reserved_words().contains(name) || scope_.fluents.contains(name)) {
      fail_at(tok, "cannot quantify over '" + name + "'");
    }
    bound_.push_back(name);
    Formula body;
    try {
      body = accept(".") || accept(":") ? formula() : unary_formula();
    } catch (...) {
      bound_.pop_back();
      throw;
    }
    bound_.pop_back();
    return exists(std::move(name), std::move(body));
  }
  if (accept("poss")) {
    expect("(");
    Term a = action_term();
    SitTerm s;
    if (accept(",")) s = sit_term();
    expect(")");
    return poss(std::move(a), std::move(s));
  }
  if (at("(")) {
    // Either a parenthesized term starting a comparison or a parenthesized
    // formula; try the comparison first and keep the deeper error.
    const std::size_t saved = pos_;
    try {
      return comparison();
    } catch (const SyntaxError& first) {
      const std::size_t failed_at = pos_;
      pos_ = saved;
      try {
        expect("(");
        Formula inner = formula();
        expect(")");
        return inner;
      } catch (const SyntaxError& second) {
        if (failed_at > pos_) throw first;
        throw;
      }
    }
  }
  return comparison();
}

Formula ExprParser::comparison() {
  Term lhs = term();
  if (!is_relation(peek())) fail("expected a comparison operator");
  std::vector<Formula> atoms;
  while (is_relation(peek())) {
    const Rel rel = relation_of(next().text);
    Term rhs = term();
    atoms.push_back(cmp(rel, lhs, rhs));
    lhs = rhs;
  }
  return conj(std::move(atoms));
}

}  // namespace detail

namespace {

template <class Result, class Fn>
Result parse_all(std::string_view text, const Scope& scope, Fn&& fn) {
  const auto tokens = detail::tokenize(text);
  detail::ExprParser p(tokens, scope);
  try {
    Result r = fn(p);
    if (!p.at_end()) p.fail("unexpected trailing input");
    return r;
  } catch (const detail::SyntaxError& e) {
    throw ParseError({Diagnostic{e.pos, e.message}});
  }
}

}  // namespace

Term parse_term(std::string_view text, const Scope& scope) {
  return parse_all<Term>(text, scope, [](detail::ExprParser& p) { return p.term(); });
}

Formula parse_formula(std::string_view text, const Scope& scope) {
  return parse_all<Formula>(text, scope, [](detail::ExprParser& p) { return p.formula(); });
}

Situation parse_situation(std::string_view text, const Scope& scope) {
  return parse_all<Situation>(text, scope, [](detail::ExprParser& p) {
    Situation s;
    while (!p.at_end()) {
      if (p.accept(";")) continue;
      s.actions.push_back(p.action_term());
      if (!p.at_end()) p.expect(";");
    }
    return s;
  });
}

}  // namespace beliefreg
