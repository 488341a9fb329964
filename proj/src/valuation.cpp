#include "idv/valuation.hpp"

#include <algorithm>

#include "idv/errors.hpp"

namespace idv {

Rational eval_expr(const Expr& expr, const std::vector<SignalSpace>& spaces,
                   const SignalProfile& profile) {
  switch (expr.op) {
    case Expr::Op::Const:
      return expr.value;
    case Expr::Op::Sig:
      return spaces[static_cast<std::size_t>(expr.agent)].coord(
          profile[static_cast<std::size_t>(expr.agent)], expr.coord);
    case Expr::Op::Add: {
      Rational sum = 0;
      for (const Expr& arg : expr.args) sum += eval_expr(arg, spaces, profile);
      return sum;
    }
    case Expr::Op::Scale:
      return expr.value * eval_expr(expr.args.front(), spaces, profile);
    case Expr::Op::Min: {
      Rational best = eval_expr(expr.args.front(), spaces, profile);
      for (std::size_t i = 1; i < expr.args.size(); ++i)
        best = std::min(best, eval_expr(expr.args[i], spaces, profile));
      return best;
    }
    case Expr::Op::Max: {
      Rational best = eval_expr(expr.args.front(), spaces, profile);
      for (std::size_t i = 1; i < expr.args.size(); ++i)
        best = std::max(best, eval_expr(expr.args[i], spaces, profile));
      return best;
    }
  }
  throw InputError("corrupt expression node");
}

void validate_expr(const Expr& expr, int n, int m) {
  switch (expr.op) {
    case Expr::Op::Const:
      if (expr.value < 0) throw InputError("expression constants must be nonnegative");
      return;
    case Expr::Op::Sig:
      if (expr.agent < 0 || expr.agent >= n)
        throw InputError("sig() agent index " + std::to_string(expr.agent) + " out of range");
      if (expr.coord < 0 || expr.coord >= m)
        throw InputError("sig() coordinate " + std::to_string(expr.coord) + " out of range");
      return;
    case Expr::Op::Scale:
      if (expr.value < 0) throw InputError("scale factors must be nonnegative");
      if (expr.args.size() != 1) throw InputError("scale takes exactly one argument");
      validate_expr(expr.args.front(), n, m);
      return;
    case Expr::Op::Add:
    case Expr::Op::Min:
    case Expr::Op::Max:
      if (expr.args.empty()) throw InputError("add/min/max need at least one argument");
      for (const Expr& arg : expr.args) validate_expr(arg, n, m);
      return;
  }
  throw InputError("corrupt expression node");
}

}  // namespace idv
