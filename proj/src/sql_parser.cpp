// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <array>
#include <cctype>

#include "senseforge/error.hpp"
#include "senseforge/schema.hpp"
#include "senseforge/sql.hpp"

namespace senseforge::sql {

bool Token::is(std::string_view keyword) const {
  return type == TokenType::Word && iequals(text, keyword);
}

namespace {

[[noreturn]] void fail(const std::string& message, std::size_t offset) {
  throw Error(ErrorCode::UnparsableSql, message + " at offset " + std::to_string(offset));
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return ident_start(c) || std::isdigit(c) || c == '$'; }

std::string read_quoted(std::string_view sql, std::size_t& i, char close, bool doubling) {
  const std::size_t start = i;
  std::string out;
  ++i;
  while (i < sql.size()) {
    if (sql[i] == close) {
      if (doubling && i + 1 < sql.size() && sql[i + 1] == close) {
        out.push_back(close);
        i += 2;
        continue;
      }
      ++i;
      return out;
    }
    out.push_back(sql[i++]);
  }
  fail("unterminated quoted token", start);
}

}  // namespace

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = sql.size();
  auto push = [&](TokenType type, std::string text, std::size_t offset) {
    tokens.push_back(Token{type, std::move(text), offset});
  };
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(sql[i]);
    const std::size_t start = i;
    if (std::isspace(c)) {
      ++i;
    } else if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      const auto end = sql.find("*/", i + 2);
      // SQLite tolerates an unterminated trailing comment.
      i = end == std::string_view::npos ? n : end + 2;
    } else if ((c == 'x' || c == 'X') && i + 1 < n && sql[i + 1] == '\'') {
      ++i;
      push(TokenType::Blob, read_quoted(sql, i, '\'', false), start);
    } else if (ident_start(c)) {
      while (i < n && ident_char(static_cast<unsigned char>(sql[i]))) ++i;
      push(TokenType::Word, std::string(sql.substr(start, i - start)), start);
    } else if (c == '\'') {
      push(TokenType::String, read_quoted(sql, i, '\'', true), start);
    } else if (c == '"') {
      push(TokenType::QuotedIdentifier, read_quoted(sql, i, '"', true), start);
    } else if (c == '`') {
      push(TokenType::QuotedIdentifier, read_quoted(sql, i, '`', true), start);
    } else if (c == '[') {
      push(TokenType::QuotedIdentifier, read_quoted(sql, i, ']', false), start);
    } else if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      if (c == '0' && i + 1 < n && (sql[i + 1] == 'x' || sql[i + 1] == 'X')) {
        i += 2;
        while (i < n && std::isxdigit(static_cast<unsigned char>(sql[i]))) ++i;
      } else {
        while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
        if (i < n && sql[i] == '.') {
          ++i;
          while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
        }
        if (i < n && (sql[i] == 'e' || sql[i] == 'E')) {
          std::size_t j = i + 1;
          if (j < n && (sql[j] == '+' || sql[j] == '-')) ++j;
          if (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) {
            i = j;
            while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
          }
        }
      }
      if (i < n && ident_start(static_cast<unsigned char>(sql[i]))) fail("malformed number", start);
      push(TokenType::Number, std::string(sql.substr(start, i - start)), start);
    } else if (c == '?') {
      ++i;
      while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
      push(TokenType::Parameter, std::string(sql.substr(start, i - start)), start);
    } else if ((c == ':' || c == '@' || c == '$') && i + 1 < n &&
               ident_char(static_cast<unsigned char>(sql[i + 1]))) {
      ++i;
      while (i < n && ident_char(static_cast<unsigned char>(sql[i]))) ++i;
      push(TokenType::Parameter, std::string(sql.substr(start, i - start)), start);
    } else if (c == '(') {
      push(TokenType::LParen, "(", start), ++i;
    } else if (c == ')') {
      push(TokenType::RParen, ")", start), ++i;
    } else if (c == ',') {
      push(TokenType::Comma, ",", start), ++i;
    } else if (c == ';') {
      push(TokenType::Semicolon, ";", start), ++i;
    } else if (c == '.') {
      push(TokenType::Dot, ".", start), ++i;
    } else {
      static constexpr std::array<std::string_view, 19> kOperators = {
          "->>", "||", "->", "<<", ">>", "<=", ">=", "==", "!=", "<>",
          "<",   ">",  "=",  "+",  "-",  "*",  "/",  "%",  "&"};
      bool matched = false;
      for (auto op : kOperators) {
        if (sql.substr(i, op.size()) == op) {
          push(TokenType::Operator, std::string(op), start);
          i += op.size();
          matched = true;
          break;
        }
      }
      if (!matched && (c == '|' || c == '~')) {
        push(TokenType::Operator, std::string(1, static_cast<char>(c)), start);
        ++i;
        matched = true;
      }
      if (!matched) fail(std::string("unexpected character '") + static_cast<char>(c) + "'", start);
    }
  }
  tokens.push_back(Token{TokenType::End, "", n});
  return tokens;
}

namespace {

// Words that never serve as a bare column name or an implicit alias.
bool is_reserved(std::string_view word) {
  static constexpr std::array<std::string_view, 57> kReserved = {
      "ALL",       "AND",       "AS",        "ASC",       "BETWEEN",  "BY",
      "CASE",      "CAST",      "COLLATE",   "CROSS",     "DESC",     "DISTINCT",
      "ELSE",      "END",       "ESCAPE",    "EXCEPT",    "EXISTS",   "FILTER",
      "FROM",      "FULL",      "GLOB",      "GROUP",     "HAVING",   "IN",
      "INDEXED",   "INNER",     "INTERSECT", "IS",        "ISNULL",   "JOIN",
      "LEFT",      "LIKE",      "LIMIT",     "MATCH",     "NATURAL",  "NOT",
      "NOTNULL",   "NULL",      "OFFSET",    "ON",        "OR",       "ORDER",
      "OUTER",     "OVER",      "REGEXP",    "RETURNING", "RIGHT",    "SELECT",
      "THEN",      "UNION",     "USING",     "VALUES",    "WHEN",     "WHERE",
      "WINDOW",    "WITH",      "RAISE"};
  return std::any_of(kReserved.begin(), kReserved.end(),
                     [&](std::string_view k) { return iequals(k, word); });
}

std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

Expr make(Expr::Kind kind, std::string text = {}, std::vector<Expr> children = {}) {
  Expr e;
  e.kind = kind;
  e.text = std::move(text);
  e.children = std::move(children);
  return e;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Select parse_statement() {
    Select select = parse_select();
    while (peek().type == TokenType::Semicolon) advance();
    if (peek().type != TokenType::End) fail("unexpected '" + peek().text + "'", peek().offset);
    return select;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool accept(std::string_view keyword) {
    if (!peek().is(keyword)) return false;
    advance();
    return true;
  }
  bool accept(TokenType type) {
    if (peek().type != type) return false;
    advance();
    return true;
  }
  bool accept_operator(std::string_view op) {
    if (peek().type != TokenType::Operator || peek().text != op) return false;
    advance();
    return true;
  }
  void expect(std::string_view keyword) {
    if (!accept(keyword)) fail("expected " + std::string(keyword), peek().offset);
  }
  void expect(TokenType type, std::string_view what) {
    if (!accept(type)) fail("expected " + std::string(what), peek().offset);
  }

  bool at_select_start(std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.is("SELECT") || t.is("WITH") || t.is("VALUES");
  }

  // Identifier in a name position: bare non-reserved word or quoted name.
  bool at_name() const {
    const Token& t = peek();
    return t.type == TokenType::QuotedIdentifier ||
           (t.type == TokenType::Word && !is_reserved(t.text));
  }
  std::string parse_name() {
    const Token& t = peek();
    // Quoted names and strings are always names; so is any word here,
    // since SQLite lets most keywords double as identifiers.
    if (t.type == TokenType::QuotedIdentifier || t.type == TokenType::Word ||
        t.type == TokenType::String) {
      return advance().text;
    }
    fail("expected a name", t.offset);
  }

  std::optional<std::string> parse_alias() {
    if (accept("AS")) return parse_name();
    if (at_name() || peek().type == TokenType::String) return advance().text;
    return std::nullopt;
  }

  // Skips a balanced parenthesized group starting at '('.
  void skip_group() {
    expect(TokenType::LParen, "(");
    int depth = 1;
    while (depth > 0) {
      const Token& t = advance();
      if (t.type == TokenType::End) fail("unbalanced parentheses", t.offset);
      if (t.type == TokenType::LParen) ++depth;
      if (t.type == TokenType::RParen) --depth;
    }
  }

  Select parse_select() {
    Select select;
    if (accept("WITH")) {
      select.recursive = accept("RECURSIVE");
      do {
        CommonTableExpr cte;
        cte.name = parse_name();
        if (accept(TokenType::LParen)) {
          do cte.columns.push_back(parse_name());
          while (accept(TokenType::Comma));
          expect(TokenType::RParen, ")");
        }
        expect("AS");
        if (accept("NOT")) expect("MATERIALIZED");
        else accept("MATERIALIZED");
        expect(TokenType::LParen, "(");
        cte.select = std::make_shared<Select>(parse_select());
        expect(TokenType::RParen, ")");
        select.with.push_back(std::move(cte));
      } while (accept(TokenType::Comma));
    }
    select.cores.push_back(parse_core());
    for (;;) {
      if (accept("UNION")) {
        select.operators.push_back(accept("ALL") ? SetOperator::UnionAll : SetOperator::Union);
      } else if (accept("INTERSECT")) {
        select.operators.push_back(SetOperator::Intersect);
      } else if (accept("EXCEPT")) {
        select.operators.push_back(SetOperator::Except);
      } else {
        break;
      }
      select.cores.push_back(parse_core());
    }
    if (accept("ORDER")) {
      expect("BY");
      select.order_by = parse_order_terms();
    }
    if (accept("LIMIT")) {
      Expr first = parse_expr();
      if (accept("OFFSET")) {
        select.limit = std::move(first);
        select.offset = parse_expr();
      } else if (accept(TokenType::Comma)) {
        select.offset = std::move(first);
        select.limit = parse_expr();
      } else {
        select.limit = std::move(first);
      }
    }
    return select;
  }

  std::vector<OrderTerm> parse_order_terms() {
    std::vector<OrderTerm> terms;
    do {
      OrderTerm term;
      term.expr = parse_expr();
      if (accept("DESC")) term.descending = true;
      else accept("ASC");
      if (accept("NULLS")) {
        if (!accept("FIRST")) expect("LAST");
      }
      terms.push_back(std::move(term));
    } while (accept(TokenType::Comma));
    return terms;
  }

  SelectCore parse_core() {
    SelectCore core;
    if (accept("VALUES")) {
      do {
        expect(TokenType::LParen, "(");
        core.values.push_back(parse_expr_list());
        expect(TokenType::RParen, ")");
      } while (accept(TokenType::Comma));
      return core;
    }
    expect("SELECT");
    if (accept("DISTINCT")) core.distinct = true;
    else accept("ALL");
    do core.columns.push_back(parse_result_column());
    while (accept(TokenType::Comma));
    if (accept("FROM")) core.from = parse_join_clause();
    if (accept("WHERE")) core.where = parse_expr();
    if (accept("GROUP")) {
      expect("BY");
      core.group_by = parse_expr_list();
    }
    if (accept("HAVING")) core.having = parse_expr();
    if (accept("WINDOW")) {
      do {
        parse_name();
        expect("AS");
        skip_group();
      } while (accept(TokenType::Comma));
    }
    return core;
  }

  ResultColumn parse_result_column() {
    ResultColumn column;
    if (peek().type == TokenType::Operator && peek().text == "*") {
      advance();
      column.kind = ResultColumn::Kind::Star;
      return column;
    }
    if ((peek().type == TokenType::Word || peek().type == TokenType::QuotedIdentifier) &&
        peek(1).type == TokenType::Dot && peek(2).type == TokenType::Operator &&
        peek(2).text == "*") {
      column.kind = ResultColumn::Kind::TableStar;
      column.table = advance().text;
      advance();
      advance();
      return column;
    }
    column.expr = parse_expr();
    if (auto alias = parse_alias()) column.alias = *alias;
    return column;
  }

  JoinClause parse_join_clause() {
    JoinClause clause;
    clause.first = parse_table_ref();
    for (;;) {
      JoinStep step;
      if (accept(TokenType::Comma)) {
        step.kind = JoinKind::Comma;
      } else {
        const std::size_t save = pos_;
        step.natural = accept("NATURAL");
        if (accept("LEFT")) {
          accept("OUTER");
          step.kind = JoinKind::Left;
        } else if (accept("RIGHT")) {
          accept("OUTER");
          step.kind = JoinKind::Right;
        } else if (accept("FULL")) {
          accept("OUTER");
          step.kind = JoinKind::Full;
        } else if (accept("INNER")) {
          step.kind = JoinKind::Inner;
        } else if (accept("CROSS")) {
          step.kind = JoinKind::Cross;
        } else {
          step.kind = JoinKind::Inner;
        }
        if (!accept("JOIN")) {
          pos_ = save;
          break;
        }
      }
      step.right = parse_table_ref();
      if (accept("ON")) {
        step.on = parse_expr();
      } else if (accept("USING")) {
        expect(TokenType::LParen, "(");
        do step.using_columns.push_back(parse_name());
        while (accept(TokenType::Comma));
        expect(TokenType::RParen, ")");
      }
      clause.steps.push_back(std::move(step));
    }
    return clause;
  }

  TableRef parse_table_ref() {
    TableRef ref;
    if (accept(TokenType::LParen)) {
      if (at_select_start()) {
        ref.kind = TableRef::Kind::Subquery;
        ref.subquery = std::make_shared<Select>(parse_select());
      } else {
        ref.kind = TableRef::Kind::Group;
        ref.group = std::make_shared<JoinClause>(parse_join_clause());
      }
      expect(TokenType::RParen, ")");
    } else {
      if (!at_name()) fail("expected a table name", peek().offset);
      ref.name = advance().text;
      if (accept(TokenType::Dot)) ref.name = parse_name();
      if (accept(TokenType::LParen)) {
        ref.kind = TableRef::Kind::Function;
        if (peek().type != TokenType::RParen) ref.args = parse_expr_list();
        expect(TokenType::RParen, ")");
      }
    }
    if (auto alias = parse_alias()) ref.alias = *alias;
    if (accept("INDEXED")) {
      expect("BY");
      parse_name();
    } else if (peek().is("NOT") && peek(1).is("INDEXED")) {
      advance();
      advance();
    }
    return ref;
  }

  std::vector<Expr> parse_expr_list() {
    std::vector<Expr> list;
    do list.push_back(parse_expr());
    while (accept(TokenType::Comma));
    return list;
  }

  Expr parse_expr() { return parse_or(); }

  Expr parse_or() {
    Expr left = parse_and();
    while (accept("OR")) left = make(Expr::Kind::Binary, "OR", {std::move(left), parse_and()});
    return left;
  }

  Expr parse_and() {
    Expr left = parse_not();
    while (accept("AND")) left = make(Expr::Kind::Binary, "AND", {std::move(left), parse_not()});
    return left;
  }

  Expr parse_not() {
    if (peek().is("NOT") && !peek(1).is("EXISTS")) {
      advance();
      return make(Expr::Kind::Unary, "NOT", {parse_not()});
    }
    return parse_equality();
  }

  Expr parse_equality() {
    Expr left = parse_comparison();
    for (;;) {
      const Token& t = peek();
      if (t.type == TokenType::Operator &&
          (t.text == "=" || t.text == "==" || t.text == "!=" || t.text == "<>")) {
        std::string op = advance().text;
        left = make(Expr::Kind::Binary, op, {std::move(left), parse_comparison()});
        continue;
      }
      if (t.is("IS")) {
        advance();
        std::string op = "IS";
        if (accept("NOT")) op = "IS NOT";
        if (accept("DISTINCT")) {
          expect("FROM");
          op = op == "IS" ? "IS DISTINCT FROM" : "IS NOT DISTINCT FROM";
        }
        left = make(Expr::Kind::Binary, op, {std::move(left), parse_comparison()});
        continue;
      }
      if (t.is("ISNULL") || t.is("NOTNULL")) {
        Expr e = make(Expr::Kind::IsNull, "", {std::move(left)});
        e.negated = advance().is("NOTNULL");
        left = std::move(e);
        continue;
      }
      bool negated = false;
      std::size_t save = pos_;
      if (t.is("NOT")) {
        advance();
        negated = true;
        if (accept("NULL")) {
          Expr e = make(Expr::Kind::IsNull, "", {std::move(left)});
          e.negated = true;
          left = std::move(e);
          continue;
        }
      }
      if (accept("BETWEEN")) {
        Expr low = parse_comparison();
        expect("AND");
        Expr high = parse_comparison();
        Expr e = make(Expr::Kind::Between, "", {std::move(left), std::move(low), std::move(high)});
        e.negated = negated;
        left = std::move(e);
        continue;
      }
      if (accept("IN")) {
        Expr e = make(Expr::Kind::In, "", {std::move(left)});
        e.negated = negated;
        if (accept(TokenType::LParen)) {
          if (at_select_start()) {
            e.subquery = std::make_shared<Select>(parse_select());
          } else if (peek().type != TokenType::RParen) {
            for (auto& item : parse_expr_list()) e.children.push_back(std::move(item));
          }
          expect(TokenType::RParen, ")");
        } else {
          // `x IN table` / `x IN table_function(...)`
          e.children.push_back(make(Expr::Kind::Column, parse_name()));
          if (accept(TokenType::Dot)) e.children.back().text = parse_name();
          if (accept(TokenType::LParen)) {
            if (peek().type != TokenType::RParen) parse_expr_list();
            expect(TokenType::RParen, ")");
          }
        }
        left = std::move(e);
        continue;
      }
      if (peek().is("LIKE") || peek().is("GLOB") || peek().is("REGEXP") || peek().is("MATCH")) {
        std::string op = upper(advance().text);
        Expr e = make(Expr::Kind::Like, op, {std::move(left), parse_comparison()});
        if (accept("ESCAPE")) e.children.push_back(parse_comparison());
        e.negated = negated;
        left = std::move(e);
        continue;
      }
      pos_ = save;
      break;
    }
    return left;
  }

  Expr parse_comparison() {
    Expr left = parse_bitwise();
    while (peek().type == TokenType::Operator &&
           (peek().text == "<" || peek().text == "<=" || peek().text == ">" ||
            peek().text == ">=")) {
      std::string op = advance().text;
      left = make(Expr::Kind::Binary, op, {std::move(left), parse_bitwise()});
    }
    return left;
  }

  Expr parse_bitwise() {
    Expr left = parse_additive();
    while (peek().type == TokenType::Operator &&
           (peek().text == "&" || peek().text == "|" || peek().text == "<<" ||
            peek().text == ">>")) {
      std::string op = advance().text;
      left = make(Expr::Kind::Binary, op, {std::move(left), parse_additive()});
    }
    return left;
  }

  Expr parse_additive() {
    Expr left = parse_multiplicative();
    while (peek().type == TokenType::Operator && (peek().text == "+" || peek().text == "-")) {
      std::string op = advance().text;
      left = make(Expr::Kind::Binary, op, {std::move(left), parse_multiplicative()});
    }
    return left;
  }

  Expr parse_multiplicative() {
    Expr left = parse_concat();
    while (peek().type == TokenType::Operator &&
           (peek().text == "*" || peek().text == "/" || peek().text == "%")) {
      std::string op = advance().text;
      left = make(Expr::Kind::Binary, op, {std::move(left), parse_concat()});
    }
    return left;
  }

  Expr parse_concat() {
    Expr left = parse_unary();
    while (peek().type == TokenType::Operator &&
           (peek().text == "||" || peek().text == "->" || peek().text == "->>")) {
      std::string op = advance().text;
      left = make(Expr::Kind::Binary, op, {std::move(left), parse_unary()});
    }
    return left;
  }

  Expr parse_unary() {
    if (peek().type == TokenType::Operator &&
        (peek().text == "-" || peek().text == "+" || peek().text == "~")) {
      std::string op = advance().text;
      return make(Expr::Kind::Unary, op, {parse_unary()});
    }
    Expr e = parse_primary();
    while (accept("COLLATE")) e = make(Expr::Kind::Collate, parse_name(), {std::move(e)});
    return e;
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.type) {
      case TokenType::Number:
      case TokenType::String:
      case TokenType::Blob:
        return make(Expr::Kind::Literal, advance().text);
      case TokenType::Parameter:
        return make(Expr::Kind::Parameter, advance().text);
      case TokenType::LParen: {
        advance();
        if (at_select_start()) {
          Expr e = make(Expr::Kind::Subquery);
          e.subquery = std::make_shared<Select>(parse_select());
          expect(TokenType::RParen, ")");
          return e;
        }
        std::vector<Expr> items = parse_expr_list();
        expect(TokenType::RParen, ")");
        if (items.size() == 1) return std::move(items.front());
        return make(Expr::Kind::Row, "", std::move(items));
      }
      case TokenType::QuotedIdentifier:
        return parse_column_ref();
      case TokenType::Operator:
        if (t.text == "*") {
          advance();
          return make(Expr::Kind::Star);
        }
        break;
      case TokenType::Word:
        return parse_word();
      default:
        break;
    }
    fail(t.type == TokenType::End ? "unexpected end of input" : "unexpected '" + t.text + "'",
         t.offset);
  }

  Expr parse_word() {
    const Token& t = peek();
    if (t.is("NULL") || t.is("TRUE") || t.is("FALSE") || t.is("CURRENT_TIME") ||
        t.is("CURRENT_DATE") || t.is("CURRENT_TIMESTAMP")) {
      return make(Expr::Kind::Literal, upper(advance().text));
    }
    if (t.is("CAST")) {
      advance();
      expect(TokenType::LParen, "(");
      Expr inner = parse_expr();
      expect("AS");
      std::string type_name;
      while (peek().type == TokenType::Word || peek().type == TokenType::QuotedIdentifier) {
        if (!type_name.empty()) type_name += ' ';
        type_name += advance().text;
      }
      if (accept(TokenType::LParen)) {
        while (!accept(TokenType::RParen)) {
          if (peek().type == TokenType::End) fail("unterminated type name", peek().offset);
          advance();
        }
      }
      expect(TokenType::RParen, ")");
      return make(Expr::Kind::Cast, upper(type_name), {std::move(inner)});
    }
    if (t.is("CASE")) {
      advance();
      Expr e = make(Expr::Kind::Case);
      if (!peek().is("WHEN")) {
        e.text = "operand";
        e.children.push_back(parse_expr());
      }
      while (accept("WHEN")) {
        e.children.push_back(parse_expr());
        expect("THEN");
        e.children.push_back(parse_expr());
      }
      if (accept("ELSE")) e.children.push_back(parse_expr());
      expect("END");
      return e;
    }
    if (t.is("EXISTS") || (t.is("NOT") && peek(1).is("EXISTS"))) {
      Expr e = make(Expr::Kind::Exists);
      e.negated = advance().is("NOT");
      if (e.negated) advance();
      expect(TokenType::LParen, "(");
      e.subquery = std::make_shared<Select>(parse_select());
      expect(TokenType::RParen, ")");
      return e;
    }
    if (t.is("RAISE")) {
      advance();
      skip_group();
      return make(Expr::Kind::Raise);
    }
    if (peek(1).type == TokenType::LParen) return parse_function();
    if (is_reserved(t.text)) fail("unexpected keyword " + t.text, t.offset);
    return parse_column_ref();
  }

  Expr parse_function() {
    Expr e = make(Expr::Kind::Function, to_lower(advance().text));
    expect(TokenType::LParen, "(");
    if (accept("DISTINCT")) e.distinct = true;
    else accept("ALL");
    if (peek().type == TokenType::Operator && peek().text == "*") {
      advance();
      e.children.push_back(make(Expr::Kind::Star));
    } else if (peek().type != TokenType::RParen) {
      e.children = parse_expr_list();
      if (accept("ORDER")) {
        expect("BY");
        parse_order_terms();
      }
    }
    expect(TokenType::RParen, ")");
    if (accept("FILTER")) {
      expect(TokenType::LParen, "(");
      expect("WHERE");
      parse_expr();
      expect(TokenType::RParen, ")");
    }
    if (accept("OVER")) {
      if (peek().type == TokenType::LParen) skip_group();
      else parse_name();
    }
    return e;
  }

  Expr parse_column_ref() {
    std::string name = advance().text;
    while (peek().type == TokenType::Dot) {
      advance();
      name += '.';
      name += parse_name();
    }
    return make(Expr::Kind::Column, std::move(name));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Select parse_select(std::string_view sql) {
  Parser parser(tokenize(sql));
  return parser.parse_statement();
}

bool has_top_level_order_by(std::string_view sql) {
  try {
    return !parse_select(sql).order_by.empty();
  } catch (const Error&) {
  }
  std::vector<Token> tokens;
  try {
    tokens = tokenize(sql);
  } catch (const Error&) {
    return false;
  }
  int depth = 0;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i].type == TokenType::LParen) ++depth;
    if (tokens[i].type == TokenType::RParen) --depth;
    if (depth == 0 && tokens[i].is("ORDER") && tokens[i + 1].is("BY")) return true;
  }
  return false;
}

}  // namespace senseforge::sql
