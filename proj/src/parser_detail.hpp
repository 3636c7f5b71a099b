// Lexer and recursive-descent expression parser shared by the query and
// theory front ends. Not installed.

#ifndef BELIEFREG_PARSER_DETAIL_HPP
#define BELIEFREG_PARSER_DETAIL_HPP

#include "beliefreg/ast.hpp"
#include "beliefreg/errors.hpp"
#include "beliefreg/parser.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace beliefreg::detail {

enum class TokKind { Ident, Number, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  SourcePos pos;
  bool first_on_line = false;
};

/// Splits UTF-8 source into tokens; throws ParseError on stray characters.
std::vector<Token> tokenize(std::string_view source);

/// Thrown inside the parser; converted to ParseError at the API boundary.
struct SyntaxError {
  SourcePos pos;
  std::string message;
};

class ExprParser {
 public:
  ExprParser(const std::vector<Token>& tokens, const Scope& scope);

  Term term();
  Formula formula();
  Term action_term();
  SitTerm sit_term();

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at(std::string_view text) const;
  bool at_end() const { return peek().kind == TokKind::End; }
  bool accept(std::string_view text);
  const Token& expect(std::string_view text);
  std::string expect_ident();
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& tok, const std::string& message) const;

  std::size_t position() const { return pos_; }
  void seek(std::size_t pos) { pos_ = pos; }

  Scope& scope() { return scope_; }

 private:
  Term sum();
  Term product();
  Term unary();
  Term power(Term base);
  Term primary();
  Term identifier_term(const Token& tok);
  std::vector<Term> call_args();
  Formula disjunction();
  Formula conjunction();
  Formula unary_formula();
  Formula comparison();
  bool is_bound(const std::string& name) const;

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
  Scope scope_;
  std::vector<std::string> bound_;
  int action_arg_depth_ = 0;
};

Number literal_value(const Token& tok);

}  // namespace beliefreg::detail

#endif  // BELIEFREG_PARSER_DETAIL_HPP
