// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// A parser for the SELECT subset of the SQLite dialect. It builds just
// enough of an AST to count syntactic components (joins, nested queries,
// aggregates, conditions); it does no name resolution and no typing.
namespace senseforge::sql {

enum class TokenType {
  Word,              // bare identifier or keyword
  QuotedIdentifier,  // "x", [x], `x`
  String,
  Blob,
  Number,
  Parameter,
  Operator,
  LParen,
  RParen,
  Comma,
  Semicolon,
  Dot,
  End,
};

struct Token {
  TokenType type = TokenType::End;
  std::string text;  // unquoted/unescaped value for identifiers and strings
  std::size_t offset = 0;

  /// Case-insensitive keyword test; only Word tokens can be keywords.
  bool is(std::string_view keyword) const;
};

/// Splits SQL into tokens, dropping whitespace and comments. Throws
/// UnparsableSql on unterminated literals or stray characters.
std::vector<Token> tokenize(std::string_view sql);

struct Select;

struct Expr {
  enum class Kind {
    Literal,
    Column,
    Star,
    Parameter,
    Unary,
    Binary,    // text holds the upper-cased operator, e.g. "AND", "=", "||"
    Function,  // text holds the lower-cased function name
    Case,
    Cast,
    Between,
    In,
    Exists,
    Subquery,
    Like,  // LIKE, GLOB, REGEXP, MATCH; text holds which
    IsNull,
    Collate,
    Raise,
    Row,
  };

  Kind kind = Kind::Literal;
  std::string text;
  std::vector<Expr> children;
  /// Set for Subquery, Exists and the `IN (SELECT ...)` form of In.
  std::shared_ptr<const Select> subquery;
  bool negated = false;
  bool distinct = false;
};

enum class JoinKind { Comma, Inner, Left, Right, Full, Cross };

struct JoinClause;

struct TableRef {
  enum class Kind { Named, Subquery, Function, Group };

  Kind kind = Kind::Named;
  std::string name;
  std::string alias;
  std::shared_ptr<const Select> subquery;
  std::vector<Expr> args;
  std::shared_ptr<const JoinClause> group;  // parenthesized join
};

struct JoinStep {
  JoinKind kind = JoinKind::Comma;
  bool natural = false;
  TableRef right;
  std::optional<Expr> on;
  std::vector<std::string> using_columns;
};

struct JoinClause {
  TableRef first;
  std::vector<JoinStep> steps;
};

struct ResultColumn {
  enum class Kind { Expression, Star, TableStar };

  Kind kind = Kind::Expression;
  Expr expr;
  std::string table;  // for TableStar
  std::string alias;
};

struct OrderTerm {
  Expr expr;
  bool descending = false;
};

struct SelectCore {
  bool distinct = false;
  std::vector<ResultColumn> columns;
  std::optional<JoinClause> from;
  std::optional<Expr> where;
  std::vector<Expr> group_by;
  std::optional<Expr> having;
  std::vector<std::vector<Expr>> values;  // VALUES (...) form
};

enum class SetOperator { Union, UnionAll, Intersect, Except };

struct CommonTableExpr {
  std::string name;
  std::vector<std::string> columns;
  std::shared_ptr<const Select> select;
};

struct Select {
  bool recursive = false;
  std::vector<CommonTableExpr> with;
  std::vector<SelectCore> cores;          // cores.size() == operators.size() + 1
  std::vector<SetOperator> operators;
  std::vector<OrderTerm> order_by;
  std::optional<Expr> limit;
  std::optional<Expr> offset;
};

/// Parses exactly one SELECT statement (compound and WITH allowed), with an
/// optional trailing semicolon. Throws UnparsableSql otherwise.
Select parse_select(std::string_view sql);

/// True iff the outermost statement has an ORDER BY (ORDER BY inside
/// subqueries and window definitions does not count). Falls back to a
/// depth-0 token scan when the statement does not parse.
bool has_top_level_order_by(std::string_view sql);

}  // namespace senseforge::sql
