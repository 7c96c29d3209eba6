// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/hardness.hpp"

#include <algorithm>
#include <array>


namespace senseforge {

std::string_view to_string(Hardness level) noexcept {
  switch (level) {
    case Hardness::Easy: return "easy";
    case Hardness::Medium: return "medium";
    case Hardness::Hard: return "hard";
    case Hardness::ExtraHard: return "extra";
  }
  return "extra";
}

namespace {

using sql::Expr;
using sql::JoinClause;
using sql::Select;
using sql::TableRef;

// Visits expression nodes without entering nested SELECTs.
template <class Fn>
void visit(const Expr& e, Fn&& fn) {
  fn(e);
  for (const auto& child : e.children) visit(child, fn);
}

bool is_aggregate(const Expr& e) {
  static constexpr std::array<std::string_view, 5> kAggregates = {"count", "sum", "avg", "min",
                                                                  "max"};
  return e.kind == Expr::Kind::Function && e.children.size() <= 1 &&
         std::find(kAggregates.begin(), kAggregates.end(), e.text) != kAggregates.end();
}

bool is_nested_select(const Expr& e) { return e.subquery != nullptr; }

int count_if_in(const Expr& e, bool (*pred)(const Expr&)) {
  int n = 0;
  visit(e, [&](const Expr& node) { n += pred(node) ? 1 : 0; });
  return n;
}

bool is_or(const Expr& e) { return e.kind == Expr::Kind::Binary && e.text == "OR"; }
bool is_like(const Expr& e) { return e.kind == Expr::Kind::Like && e.text == "LIKE"; }

int count_conditions(const Expr& e) {
  if (e.kind == Expr::Kind::Binary && (e.text == "AND" || e.text == "OR")) {
    return count_conditions(e.children[0]) + count_conditions(e.children[1]);
  }
  return 1;
}

// ON conditions of a join tree, including parenthesized groups.
void collect_on(const JoinClause& clause, std::vector<const Expr*>& out) {
  auto from_ref = [&](const TableRef& ref) {
    if (ref.kind == TableRef::Kind::Group) collect_on(*ref.group, out);
  };
  from_ref(clause.first);
  for (const auto& step : clause.steps) {
    from_ref(step.right);
    if (step.on) out.push_back(&*step.on);
  }
}

int outer_joins(const JoinClause& clause) {
  auto from_ref = [](const TableRef& ref) {
    return ref.kind == TableRef::Kind::Group ? outer_joins(*ref.group) : 0;
  };
  int n = static_cast<int>(clause.steps.size()) + from_ref(clause.first);
  for (const auto& step : clause.steps) n += from_ref(step.right);
  return n;
}

int from_subqueries(const JoinClause& clause) {
  auto from_ref = [](const TableRef& ref) {
    if (ref.kind == TableRef::Kind::Subquery) return 1;
    if (ref.kind == TableRef::Kind::Group) return from_subqueries(*ref.group);
    return 0;
  };
  int n = from_ref(clause.first);
  for (const auto& step : clause.steps) n += from_ref(step.right);
  return n;
}

}  // namespace

HardnessComponents hardness_components(const Select& select) {
  const auto& core = select.cores.front();
  HardnessComponents c;

  std::vector<const Expr*> conditions;
  if (core.from) collect_on(*core.from, conditions);
  if (core.where) conditions.push_back(&*core.where);
  if (core.having) conditions.push_back(&*core.having);

  c.comp1 += core.where ? 1 : 0;
  c.comp1 += core.group_by.empty() ? 0 : 1;
  c.comp1 += select.order_by.empty() ? 0 : 1;
  c.comp1 += select.limit ? 1 : 0;
  c.comp1 += core.from ? outer_joins(*core.from) : 0;
  for (const Expr* e : conditions) c.comp1 += count_if_in(*e, is_or) + count_if_in(*e, is_like);

  c.comp2 += static_cast<int>(select.operators.size());
  c.comp2 += static_cast<int>(select.with.size());
  c.comp2 += core.from ? from_subqueries(*core.from) : 0;
  for (const Expr* e : conditions) c.comp2 += count_if_in(*e, is_nested_select);

  int aggregates = 0;
  for (const auto& column : core.columns) {
    if (column.kind == sql::ResultColumn::Kind::Expression) {
      aggregates += count_if_in(column.expr, is_aggregate);
    }
  }
  if (core.where) aggregates += count_if_in(*core.where, is_aggregate);
  for (const auto& g : core.group_by) aggregates += count_if_in(g, is_aggregate);
  for (const auto& o : select.order_by) aggregates += count_if_in(o.expr, is_aggregate);
  if (core.having) aggregates += count_if_in(*core.having, is_aggregate);

  c.others += aggregates > 1 ? 1 : 0;
  c.others += core.columns.size() > 1 ? 1 : 0;
  c.others += core.where && count_conditions(*core.where) > 1 ? 1 : 0;
  c.others += core.group_by.size() > 1 ? 1 : 0;
  return c;
}

HardnessComponents hardness_components(std::string_view sql) {
  return hardness_components(sql::parse_select(sql));
}

Hardness classify_components(const HardnessComponents& c) noexcept {
  if (c.comp1 <= 1 && c.comp2 == 0 && c.others == 0) return Hardness::Easy;
  if (c.comp2 == 0 && ((c.others <= 2 && c.comp1 <= 1) || (c.comp1 <= 2 && c.others < 2))) {
    return Hardness::Medium;
  }
  if ((c.comp2 == 0 && ((c.others > 2 && c.comp1 <= 2) ||
                        (c.comp1 > 2 && c.comp1 <= 3 && c.others <= 2))) ||
      (c.comp2 <= 1 && c.comp1 <= 1 && c.others == 0)) {
    return Hardness::Hard;
  }
  return Hardness::ExtraHard;
}

Hardness classify_hardness(std::string_view sql) {
  return classify_components(hardness_components(sql));
}

namespace {

int joins_in(const Select& select);

int joins_in_expr(const Expr& e) {
  int n = e.subquery ? joins_in(*e.subquery) : 0;
  for (const auto& child : e.children) n += joins_in_expr(child);
  return n;
}

int joins_in_clause(const JoinClause& clause) {
  auto from_ref = [](const TableRef& ref) {
    int n = 0;
    if (ref.subquery) n += joins_in(*ref.subquery);
    if (ref.group) n += joins_in_clause(*ref.group);
    for (const auto& arg : ref.args) n += joins_in_expr(arg);
    return n;
  };
  int n = static_cast<int>(clause.steps.size()) + from_ref(clause.first);
  for (const auto& step : clause.steps) {
    n += from_ref(step.right);
    if (step.on) n += joins_in_expr(*step.on);
  }
  return n;
}

int joins_in(const Select& select) {
  int n = 0;
  for (const auto& cte : select.with) n += joins_in(*cte.select);
  for (const auto& core : select.cores) {
    for (const auto& column : core.columns) n += joins_in_expr(column.expr);
    if (core.from) n += joins_in_clause(*core.from);
    if (core.where) n += joins_in_expr(*core.where);
    for (const auto& g : core.group_by) n += joins_in_expr(g);
    if (core.having) n += joins_in_expr(*core.having);
    for (const auto& row : core.values) {
      for (const auto& v : row) n += joins_in_expr(v);
    }
  }
  for (const auto& o : select.order_by) n += joins_in_expr(o.expr);
  if (select.limit) n += joins_in_expr(*select.limit);
  if (select.offset) n += joins_in_expr(*select.offset);
  return n;
}

}  // namespace

int count_joins(const Select& select) { return joins_in(select); }

int count_joins(std::string_view sql) { return joins_in(sql::parse_select(sql)); }

}  // namespace senseforge
