#include "idv/lp.hpp"

#include <algorithm>

#include "idv/errors.hpp"

namespace idv {

LinearConstraint& LinearProgram::add(std::vector<Rational> coeffs, Sense sense, Rational rhs) {
  constraints.push_back(LinearConstraint{std::move(coeffs), sense, std::move(rhs)});
  return constraints.back();
}

namespace {

// Dense exact tableau. Column layout: structural | slack/surplus | artificial,
// with the right-hand side stored as the last column so objective-row updates
// are uniform. The objective row holds reduced costs; a column with positive
// reduced cost improves the (maximization) objective.
struct Tableau {
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> obj;
  std::vector<int> basis;     // row -> basic column
  std::size_t cols = 0;       // excluding the rhs column
  std::size_t first_artificial = 0;

  Rational& rhs(std::size_t r) { return rows[r][cols]; }

  void pivot(std::size_t row, std::size_t col) {
    Rational factor = rows[row][col];
    for (Rational& v : rows[row]) v /= factor;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == row || rows[r][col] == 0) continue;
      Rational scale = rows[r][col];
      for (std::size_t c = 0; c <= cols; ++c) rows[r][c] -= scale * rows[row][c];
    }
    if (obj[col] != 0) {
      Rational scale = obj[col];
      for (std::size_t c = 0; c <= cols; ++c) obj[c] -= scale * rows[row][c];
    }
    basis[row] = static_cast<int>(col);
  }

  // Least-index pivoting; returns Optimal when no reduced cost is positive,
  // Unbounded when an improving column has no blocking row.
  LpStatus iterate(bool allow_artificial_entering) {
    for (;;) {
      std::size_t entering = cols;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!allow_artificial_entering && c >= first_artificial) break;
        if (obj[c] > 0) {
          entering = c;
          break;
        }
      }
      if (entering == cols) return LpStatus::Optimal;

      std::size_t leaving = rows.size();
      Rational best_ratio;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r][entering] <= 0) continue;
        Rational ratio = rhs(r) / rows[r][entering];
        if (leaving == rows.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis[r] < basis[leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (leaving == rows.size()) return LpStatus::Unbounded;
      pivot(leaving, entering);
    }
  }
};

}  // namespace

LpResult lp_maximize(const LinearProgram& program) {
  const int n = program.num_vars;
  if (n <= 0) throw InputError("linear program needs at least one variable");
  if (static_cast<int>(program.objective.size()) != n)
    throw InputError("objective length does not match the variable count");
  for (const LinearConstraint& c : program.constraints)
    if (static_cast<int>(c.coeffs.size()) != n)
      throw InputError("constraint length does not match the variable count");

  const std::size_t m = program.constraints.size();
  std::size_t slack_count = 0;
  for (const LinearConstraint& c : program.constraints)
    if (c.sense != Sense::Eq) ++slack_count;

  // Normalize rows to nonnegative rhs, then attach slack (<=), surplus (>=)
  // and artificial columns.
  std::vector<std::vector<Rational>> coeffs(m);
  std::vector<Sense> senses(m);
  std::vector<Rational> rhs(m);
  for (std::size_t r = 0; r < m; ++r) {
    coeffs[r] = program.constraints[r].coeffs;
    senses[r] = program.constraints[r].sense;
    rhs[r] = program.constraints[r].rhs;
    if (rhs[r] < 0) {
      for (Rational& v : coeffs[r]) v = -v;
      rhs[r] = -rhs[r];
      if (senses[r] == Sense::Le)
        senses[r] = Sense::Ge;
      else if (senses[r] == Sense::Ge)
        senses[r] = Sense::Le;
    }
  }

  std::size_t artificial_count = 0;
  for (Sense s : senses)
    if (s != Sense::Le) ++artificial_count;

  Tableau t;
  t.first_artificial = static_cast<std::size_t>(n) + slack_count;
  t.cols = t.first_artificial + artificial_count;
  t.rows.assign(m, std::vector<Rational>(t.cols + 1, Rational(0)));
  t.basis.assign(m, -1);

  std::size_t next_slack = static_cast<std::size_t>(n);
  std::size_t next_artificial = t.first_artificial;
  for (std::size_t r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) t.rows[r][static_cast<std::size_t>(c)] = coeffs[r][static_cast<std::size_t>(c)];
    t.rows[r][t.cols] = rhs[r];
    switch (senses[r]) {
      case Sense::Le:
        t.rows[r][next_slack] = 1;
        t.basis[r] = static_cast<int>(next_slack);
        ++next_slack;
        break;
      case Sense::Ge:
        t.rows[r][next_slack] = -1;
        ++next_slack;
        t.rows[r][next_artificial] = 1;
        t.basis[r] = static_cast<int>(next_artificial);
        ++next_artificial;
        break;
      case Sense::Eq:
        t.rows[r][next_artificial] = 1;
        t.basis[r] = static_cast<int>(next_artificial);
        ++next_artificial;
        break;
    }
  }

  if (artificial_count > 0) {
    // Phase 1: maximize minus the artificial sum; feasible iff it reaches 0.
    t.obj.assign(t.cols + 1, Rational(0));
    for (std::size_t c = t.first_artificial; c < t.cols; ++c) t.obj[c] = -1;
    for (std::size_t r = 0; r < m; ++r)
      if (t.basis[r] >= static_cast<int>(t.first_artificial))
        for (std::size_t c = 0; c <= t.cols; ++c) t.obj[c] += t.rows[r][c];
    LpStatus phase1 = t.iterate(true);
    if (phase1 == LpStatus::Unbounded)
      throw DomainError("internal solver error: unbounded feasibility phase");
    if (t.obj[t.cols] != 0) return LpResult{LpStatus::Infeasible, Rational(0), {}};

    // Drive leftover artificials out of the basis; an all-zero row is
    // redundant and dropped.
    for (std::size_t r = 0; r < t.rows.size();) {
      if (t.basis[r] < static_cast<int>(t.first_artificial)) {
        ++r;
        continue;
      }
      std::size_t c = 0;
      while (c < t.first_artificial && t.rows[r][c] == 0) ++c;
      if (c < t.first_artificial) {
        t.pivot(r, c);
        ++r;
      } else {
        t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(r));
        t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(r));
      }
    }
  }

  // Phase 2 objective, expressed over the current basis.
  t.obj.assign(t.cols + 1, Rational(0));
  for (int c = 0; c < n; ++c) t.obj[static_cast<std::size_t>(c)] = program.objective[static_cast<std::size_t>(c)];
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::size_t b = static_cast<std::size_t>(t.basis[r]);
    if (t.obj[b] != 0) {
      Rational scale = t.obj[b];
      for (std::size_t c = 0; c <= t.cols; ++c) t.obj[c] -= scale * t.rows[r][c];
    }
  }
  LpStatus phase2 = t.iterate(false);
  if (phase2 == LpStatus::Unbounded) return LpResult{LpStatus::Unbounded, Rational(0), {}};

  LpResult result;
  result.status = LpStatus::Optimal;
  result.value = -t.obj[t.cols];
  result.solution.assign(static_cast<std::size_t>(n), Rational(0));
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (t.basis[r] < n) result.solution[static_cast<std::size_t>(t.basis[r])] = t.rows[r][t.cols];
  return result;
}

void MinimalFamily::insert(Bundle b) {
  for (const Bundle& existing : sets_)
    if (existing.subset_of(b)) return;
  std::erase_if(sets_, [&](const Bundle& existing) { return b.subset_of(existing); });
  sets_.push_back(b);
}

MarginResult strict_unaffordability_margin(int m, const std::vector<Bundle>& high_sets,
                                           const Rational& alpha, std::optional<Bundle> affordable) {
  if (m < 0 || m > kMaxItems) throw InputError("item count out of range");
  if (m == 0) return MarginResult{};  // no price vector exists over zero items

  Bundle all = Bundle::full(m);
  MinimalFamily minimal;
  for (const Bundle& b : high_sets) {
    if (b.bits & ~all.bits) throw InputError("high set contains items outside the instance");
    minimal.insert(b);
  }
  if (affordable && (affordable->bits & ~all.bits))
    throw InputError("affordable set contains items outside the instance");

  // Variables p_0..p_{m-1} and d = delta + 1 >= 0. The d <= 2 cap (delta <=
  // 1) only binds when the high family is empty, making the vacuous case
  // well-defined with margin 1; with a nonempty family delta <= 1 - alpha
  // anyway because prices sum to 1.
  LinearProgram lp;
  lp.num_vars = m + 1;
  lp.objective.assign(static_cast<std::size_t>(m + 1), Rational(0));
  lp.objective.back() = 1;

  std::vector<Rational> simplex_row(static_cast<std::size_t>(m + 1), Rational(1));
  simplex_row.back() = 0;
  lp.add(simplex_row, Sense::Eq, Rational(1));

  for (const Bundle& high : minimal.sets()) {
    std::vector<Rational> row(static_cast<std::size_t>(m + 1), Rational(0));
    for (int item : high.items()) row[static_cast<std::size_t>(item)] = 1;
    row.back() = -1;
    lp.add(std::move(row), Sense::Ge, alpha - 1);
  }
  if (affordable) {
    std::vector<Rational> row(static_cast<std::size_t>(m + 1), Rational(0));
    for (int item : affordable->items()) row[static_cast<std::size_t>(item)] = 1;
    lp.add(std::move(row), Sense::Le, alpha);
  }
  std::vector<Rational> cap(static_cast<std::size_t>(m + 1), Rational(0));
  cap.back() = 1;
  lp.add(std::move(cap), Sense::Le, Rational(2));

  LpResult solved = lp_maximize(lp);
  if (solved.status == LpStatus::Infeasible) return MarginResult{};
  if (solved.status != LpStatus::Optimal)
    throw DomainError("internal solver error: margin program cannot be unbounded");

  MarginResult result;
  result.feasible = true;
  result.margin = solved.value - 1;
  result.prices.assign(solved.solution.begin(), solved.solution.begin() + m);
  return result;
}

}  // namespace idv
