#include "idv/axioms.hpp"

#include <bit>
#include <limits>
#include <random>

#include "idv/errors.hpp"

namespace idv {

ValuationClass parse_valuation_class(const std::string& name) {
  if (name == "monotone") return ValuationClass::Monotone;
  if (name == "additive") return ValuationClass::Additive;
  if (name == "xos" || name == "xos-consistent") return ValuationClass::XosConsistent;
  if (name == "subadditive") return ValuationClass::Subadditive;
  throw InputError("unknown valuation class: '" + name + "'");
}

std::string valuation_class_name(ValuationClass c) {
  switch (c) {
    case ValuationClass::Monotone: return "monotone";
    case ValuationClass::Additive: return "additive";
    case ValuationClass::XosConsistent: return "xos-consistent";
    case ValuationClass::Subadditive: return "subadditive";
  }
  return "?";
}

namespace {

// v(T) <= v(T + j) for every T and j outside T; by induction this is full
// monotonicity.
bool monotone_violation(const std::vector<Rational>& values, int m, Bundle& bad_set, Bundle& bad_item) {
  const std::size_t size = std::size_t{1} << m;
  for (std::size_t mask = 0; mask < size; ++mask) {
    for (int j = 0; j < m; ++j) {
      if ((mask >> j) & 1) continue;
      std::size_t bigger = mask | (std::size_t{1} << j);
      if (values[mask] > values[bigger]) {
        bad_set = Bundle(mask);
        bad_item = Bundle(0).with(j);
        return true;
      }
    }
  }
  return false;
}

bool additive_violation(const std::vector<Rational>& values, int m, Bundle& bad_set) {
  const std::size_t size = std::size_t{1} << m;
  for (std::size_t mask = 0; mask < size; ++mask) {
    Rational sum = 0;
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1)
      sum += values[std::uint64_t{1} << std::countr_zero(rest)];
    if (values[mask] != sum) {
      bad_set = Bundle(mask);
      return true;
    }
  }
  return false;
}

bool subadditive_violation(const std::vector<Rational>& values, int m, Bundle& a, Bundle& b) {
  const std::size_t size = std::size_t{1} << m;
  for (std::size_t left = 0; left < size; ++left) {
    for (std::size_t right = 0; right < size; ++right) {
      if (values[left] + values[right] < values[left | right]) {
        a = Bundle(left);
        b = Bundle(right);
        return true;
      }
    }
  }
  return false;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

AxiomReport sampled_check(const Instance& instance, ValuationClass claim,
                          const AxiomSampling& sampling) {
  std::mt19937_64 rng(sampling.seed);
  auto random_profile = [&]() {
    SignalProfile profile(static_cast<std::size_t>(instance.n));
    for (int i = 0; i < instance.n; ++i)
      profile[static_cast<std::size_t>(i)] =
          static_cast<int>(rng() % static_cast<std::uint64_t>(instance.space_size(i)));
    return profile;
  };
  std::uint64_t all = Bundle::full(instance.m).bits;

  AxiomReport report;
  report.sampled = true;
  for (std::uint64_t round = 0; round < sampling.samples; ++round) {
    SignalProfile profile = random_profile();
    for (int agent = 0; agent < instance.n; ++agent) {
      ++report.checks;
      Bundle t(rng() & all);
      switch (claim) {
        case ValuationClass::Monotone: {
          if (instance.m == 0) break;
          int j = static_cast<int>(rng() % static_cast<std::uint64_t>(instance.m));
          if (eval_value(instance, agent, profile, t.without(j)) >
              eval_value(instance, agent, profile, t.with(j))) {
            report.holds = false;
            report.witness = AxiomWitness{agent, profile, t.without(j), Bundle(0).with(j)};
            return report;
          }
          break;
        }
        case ValuationClass::Additive: {
          Rational sum = 0;
          for (int item : t.items()) sum += eval_value(instance, agent, profile, Bundle(0).with(item));
          if (eval_value(instance, agent, profile, t) != sum) {
            report.holds = false;
            report.witness = AxiomWitness{agent, profile, t, Bundle(0)};
            return report;
          }
          break;
        }
        case ValuationClass::Subadditive: {
          Bundle other(rng() & all);
          if (eval_value(instance, agent, profile, t) + eval_value(instance, agent, profile, other) <
              eval_value(instance, agent, profile, t.united(other))) {
            report.holds = false;
            report.witness = AxiomWitness{agent, profile, t, other};
            return report;
          }
          break;
        }
        case ValuationClass::XosConsistent:
          throw InputError("XOS consistency is structural; sampling does not apply");
      }
    }
  }
  return report;
}

}  // namespace

AxiomReport verify_valuation_axioms(const Instance& instance, ValuationClass claim,
                                    const Budgets& budgets, std::optional<AxiomSampling> sampling) {
  instance.validate();

  if (claim == ValuationClass::XosConsistent) {
    // Structural: the valuation must be in clause form and every clause entry
    // must be nonnegative at every profile (then max-of-additive holds by
    // construction).
    AxiomReport report;
    for (int agent = 0; agent < instance.n; ++agent) {
      const Valuation& v = instance.valuations[static_cast<std::size_t>(agent)];
      if (v.kind == Valuation::Kind::Table || v.kind == Valuation::Kind::SetCover)
        throw InputError("XOS consistency is only checkable for clause-form valuations");
    }
    std::uint64_t profiles = instance.profile_count();
    for (std::uint64_t flat = 0; flat < profiles; ++flat) {
      SignalProfile profile = instance.unflatten_profile(flat);
      for (int agent = 0; agent < instance.n; ++agent) {
        const Valuation& v = instance.valuations[static_cast<std::size_t>(agent)];
        auto check_clause = [&](const std::vector<Expr>& clause) {
          for (int j = 0; j < instance.m; ++j) {
            ++report.checks;
            if (report.checks > budgets.max_axiom_checks)
              throw ResourceError("axiom check budget exceeded");
            if (eval_expr(clause[static_cast<std::size_t>(j)], instance.spaces, profile) < 0) {
              report.holds = false;
              report.witness = AxiomWitness{agent, profile, Bundle(0).with(j), Bundle(0)};
            }
          }
        };
        if (v.kind == Valuation::Kind::Additive) {
          check_clause(v.items);
        } else {
          for (const auto& clause : v.clauses) check_clause(clause);
        }
        if (!report.holds) return report;
      }
    }
    return report;
  }

  std::uint64_t profiles = instance.profile_count();
  std::uint64_t per_profile = std::uint64_t{1} << std::min(instance.m, 62);
  if (claim == ValuationClass::Monotone)
    per_profile = saturating_mul(per_profile, static_cast<std::uint64_t>(std::max(instance.m, 1)));
  if (claim == ValuationClass::Subadditive)
    per_profile = saturating_mul(per_profile, std::uint64_t{1} << std::min(instance.m, 62));
  std::uint64_t total =
      saturating_mul(saturating_mul(profiles, per_profile), static_cast<std::uint64_t>(instance.n));

  if (total > budgets.max_axiom_checks || instance.m > budgets.max_subset_bits) {
    if (sampling) return sampled_check(instance, claim, *sampling);
    throw ResourceError("exhaustive axiom check needs " + std::to_string(total) +
                        " evaluations, over the budget of " +
                        std::to_string(budgets.max_axiom_checks) +
                        "; pass a sampling plan for a randomized check");
  }

  AxiomReport report;
  for (std::uint64_t flat = 0; flat < profiles; ++flat) {
    SignalProfile profile = instance.unflatten_profile(flat);
    for (int agent = 0; agent < instance.n; ++agent) {
      std::vector<Rational> values = value_table(instance, agent, profile, budgets);
      Bundle a, b;
      bool violated = false;
      switch (claim) {
        case ValuationClass::Monotone:
          violated = monotone_violation(values, instance.m, a, b);
          break;
        case ValuationClass::Additive:
          violated = additive_violation(values, instance.m, a);
          break;
        case ValuationClass::Subadditive:
          violated = subadditive_violation(values, instance.m, a, b);
          break;
        case ValuationClass::XosConsistent:
          break;  // handled above
      }
      report.checks += per_profile;
      if (violated) {
        report.holds = false;
        report.witness = AxiomWitness{agent, profile, a, b};
        return report;
      }
    }
  }
  return report;
}

}  // namespace idv
