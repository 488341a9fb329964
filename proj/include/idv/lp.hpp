#pragma once

#include <optional>
#include <vector>

#include "idv/bundle.hpp"
#include "idv/rational.hpp"

namespace idv {

enum class Sense { Le, Ge, Eq };

struct LinearConstraint {
  std::vector<Rational> coeffs;
  Sense sense = Sense::Le;
  Rational rhs;
};

/// maximize objective . x  subject to the constraints and x >= 0.
struct LinearProgram {
  int num_vars = 0;
  std::vector<Rational> objective;
  std::vector<LinearConstraint> constraints;

  LinearConstraint& add(std::vector<Rational> coeffs, Sense sense, Rational rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> solution;
};

/// Exact two-phase simplex with the least-index anti-cycling rule. Verdicts
/// and the witness vertex are exact.
LpResult lp_maximize(const LinearProgram& program);

struct MarginResult {
  bool feasible = false;
  Rational margin;               // capped at 1 so an empty high family is well-defined
  std::vector<Rational> prices;  // witness p in the simplex
};

/// Maximal delta such that some price vector p (nonnegative, summing to 1)
/// has p(T) >= alpha + delta for every high set T, while p(affordable) <=
/// alpha when that set is given. The strict system "every high set costs more
/// than alpha, the affordable set at most alpha" is solvable iff the returned
/// margin is > 0; the feasible region is closed and bounded so the margin is
/// attained. Infeasible only when the non-strict system is contradictory
/// (m = 0, or affordable = M with alpha < 1).
MarginResult strict_unaffordability_margin(int m, const std::vector<Bundle>& high_sets,
                                           const Rational& alpha,
                                           std::optional<Bundle> affordable = {});

/// Antichain of inclusion-minimal bundles. Since prices are nonnegative, a
/// "costs at least x" constraint for a superset is implied by its subset;
/// keeping only minimal high sets shrinks the margin LPs.
class MinimalFamily {
public:
  void insert(Bundle b);
  const std::vector<Bundle>& sets() const { return sets_; }

private:
  std::vector<Bundle> sets_;
};

}  // namespace idv
