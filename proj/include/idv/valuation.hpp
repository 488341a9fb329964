#pragma once

#include <functional>
#include <vector>

#include "idv/bundle.hpp"
#include "idv/rational.hpp"
#include "idv/signals.hpp"

namespace idv {

/// Expression over signal coordinates. The grammar is closed under
/// nonnegativity: constants and scale factors are required to be >= 0 and
/// signal coordinates are >= 0, so every expression evaluates to >= 0.
struct Expr {
  enum class Op { Const, Sig, Add, Scale, Min, Max };

  Op op = Op::Const;
  Rational value;            // Const payload, or Scale factor
  int agent = 0;             // Sig: whose signal
  int coord = 0;             // Sig: which per-item coordinate
  std::vector<Expr> args;

  static Expr constant(Rational c) {
    Expr e;
    e.op = Op::Const;
    e.value = std::move(c);
    return e;
  }
  static Expr sig(int agent, int coord) {
    Expr e;
    e.op = Op::Sig;
    e.agent = agent;
    e.coord = coord;
    return e;
  }
  static Expr add(std::vector<Expr> args) {
    Expr e;
    e.op = Op::Add;
    e.args = std::move(args);
    return e;
  }
  static Expr scale(Rational factor, Expr arg) {
    Expr e;
    e.op = Op::Scale;
    e.value = std::move(factor);
    e.args.push_back(std::move(arg));
    return e;
  }
  static Expr min(std::vector<Expr> args) {
    Expr e;
    e.op = Op::Min;
    e.args = std::move(args);
    return e;
  }
  static Expr max(std::vector<Expr> args) {
    Expr e;
    e.op = Op::Max;
    e.args = std::move(args);
    return e;
  }
};

Rational eval_expr(const Expr& expr, const std::vector<SignalSpace>& spaces, const SignalProfile& profile);
void validate_expr(const Expr& expr, int n, int m);

/// Signal-parameterized combinatorial valuation. Additive and Xos kinds are
/// built from per-item expressions (an Xos clause is one additive vector);
/// Table lists every (signal profile, bundle) value explicitly; SetCover is
/// the fixed signal-independent subadditive construction, see setcover.hpp.
struct Valuation {
  enum class Kind { Additive, Xos, Table, SetCover };

  Kind kind = Kind::Additive;
  std::vector<Expr> items;                   // Additive: one expression per item
  std::vector<std::vector<Expr>> clauses;    // Xos: clauses of per-item expressions
  std::vector<std::vector<Rational>> table;  // Table: rows by flat profile, cols by bundle mask
  int setcover_k = 0;

  static Valuation additive(std::vector<Expr> item_exprs) {
    Valuation v;
    v.kind = Kind::Additive;
    v.items = std::move(item_exprs);
    return v;
  }
  static Valuation xos(std::vector<std::vector<Expr>> xos_clauses) {
    Valuation v;
    v.kind = Kind::Xos;
    v.clauses = std::move(xos_clauses);
    return v;
  }
  static Valuation from_table(std::vector<std::vector<Rational>> rows) {
    Valuation v;
    v.kind = Kind::Table;
    v.table = std::move(rows);
    return v;
  }
  static Valuation set_cover(int k) {
    Valuation v;
    v.kind = Kind::SetCover;
    v.setcover_k = k;
    return v;
  }
};

/// Single-agent bundle valuation with the signal already fixed.
using BundleValuation = std::function<Rational(Bundle)>;

}  // namespace idv
