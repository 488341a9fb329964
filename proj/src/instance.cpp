#include "idv/instance.hpp"

#include <bit>
#include <limits>

#include "idv/errors.hpp"
#include "idv/setcover.hpp"

namespace idv {

namespace {

void validate_valuation(const Valuation& v, int n, int m) {
  switch (v.kind) {
    case Valuation::Kind::Additive:
      if (static_cast<int>(v.items.size()) != m)
        throw InputError("additive valuation needs one expression per item");
      for (const Expr& e : v.items) validate_expr(e, n, m);
      return;
    case Valuation::Kind::Xos:
      if (v.clauses.empty()) throw InputError("XOS valuation needs at least one clause");
      for (const auto& clause : v.clauses) {
        if (static_cast<int>(clause.size()) != m)
          throw InputError("XOS clause needs one expression per item");
        for (const Expr& e : clause) validate_expr(e, n, m);
      }
      return;
    case Valuation::Kind::Table:
      // Row count is validated against the profile space by Instance::validate.
      for (const auto& row : v.table) {
        if (m > 20 || row.size() != (std::size_t{1} << m))
          throw InputError("table row must list a value for each of the 2^m bundles");
        if (row[0] != 0) throw InputError("table valuation must be normalized: v(empty) = 0");
        for (const Rational& value : row)
          if (value < 0) throw InputError("table values must be nonnegative");
      }
      return;
    case Valuation::Kind::SetCover:
      if (v.setcover_k < 6 || v.setcover_k % 2 != 0)
        throw DomainError("set-cover valuation requires even k >= 6");
      if ((std::uint64_t{1} << v.setcover_k) - 1 != static_cast<std::uint64_t>(m))
        throw InputError("set-cover valuation requires m = 2^k - 1");
      return;
  }
  throw InputError("corrupt valuation kind");
}

}  // namespace

void Instance::validate() const {
  if (n < 2) throw InputError("instance needs at least two agents");
  if (m < 0 || m > kMaxItems)
    throw InputError("item count must lie in [0, " + std::to_string(kMaxItems) + "]");
  if (static_cast<int>(entitlements.size()) != n)
    throw InputError("entitlement count does not match n");
  Rational sum = 0;
  for (const Rational& a : entitlements) {
    if (a <= 0 || a >= 1) throw InputError("entitlements must lie strictly between 0 and 1");
    sum += a;
  }
  if (sum != 1) throw InputError("entitlements must sum to 1");
  if (static_cast<int>(spaces.size()) != n) throw InputError("signal space count does not match n");
  for (const SignalSpace& space : spaces) space.validate(m);
  if (static_cast<int>(valuations.size()) != n) throw InputError("valuation count does not match n");
  for (const Valuation& v : valuations) {
    validate_valuation(v, n, m);
    if (v.kind == Valuation::Kind::Table && v.table.size() != profile_count())
      throw InputError("table valuation needs one row per signal profile");
  }
}

bool Instance::equal_entitlements() const {
  for (const Rational& a : entitlements)
    if (a * n != 1) return false;
  return true;
}

std::uint64_t Instance::profile_count() const {
  std::uint64_t count = 1;
  for (const SignalSpace& space : spaces) {
    std::uint64_t size = space.size();
    if (count > (std::uint64_t{1} << 62) / size) return std::uint64_t{1} << 63;
    count *= size;
  }
  return count;
}

std::uint64_t Instance::flatten_profile(const SignalProfile& profile) const {
  check_profile(profile);
  std::uint64_t flat = 0;
  for (int i = 0; i < n; ++i) flat = flat * space_size(i) + static_cast<std::uint64_t>(profile[i]);
  return flat;
}

SignalProfile Instance::unflatten_profile(std::uint64_t flat) const {
  SignalProfile profile(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    std::uint64_t size = space_size(i);
    profile[static_cast<std::size_t>(i)] = static_cast<int>(flat % size);
    flat /= size;
  }
  if (flat != 0) throw InputError("flat profile index out of range");
  return profile;
}

void Instance::check_profile(const SignalProfile& profile) const {
  if (static_cast<int>(profile.size()) != n)
    throw InputError("signal profile length does not match n");
  for (int i = 0; i < n; ++i) {
    int signal = profile[static_cast<std::size_t>(i)];
    if (signal < 0 || static_cast<std::size_t>(signal) >= space_size(i))
      throw InputError("signal index " + std::to_string(signal) + " out of range for agent " +
                       std::to_string(i));
  }
}

Rational eval_value(const Instance& instance, int agent, const SignalProfile& profile,
                    Bundle bundle) {
  if (agent < 0 || agent >= instance.n) throw InputError("agent index out of range");
  instance.check_profile(profile);
  if (bundle.bits & ~Bundle::full(instance.m).bits)
    throw InputError("bundle contains items outside the instance");

  const Valuation& v = instance.valuations[static_cast<std::size_t>(agent)];
  switch (v.kind) {
    case Valuation::Kind::Additive: {
      Rational sum = 0;
      for (std::uint64_t rest = bundle.bits; rest != 0; rest &= rest - 1)
        sum += eval_expr(v.items[static_cast<std::size_t>(std::countr_zero(rest))], instance.spaces,
                         profile);
      return sum;
    }
    case Valuation::Kind::Xos: {
      Rational best = 0;  // the empty clause sum; keeps v(empty) = 0
      bool first = true;
      for (const auto& clause : v.clauses) {
        Rational sum = 0;
        for (std::uint64_t rest = bundle.bits; rest != 0; rest &= rest - 1)
          sum += eval_expr(clause[static_cast<std::size_t>(std::countr_zero(rest))], instance.spaces,
                           profile);
        if (first || sum > best) best = sum;
        first = false;
      }
      return best;
    }
    case Valuation::Kind::Table:
      return v.table[instance.flatten_profile(profile)][bundle.bits];
    case Valuation::Kind::SetCover:
      return set_cover_value(v.setcover_k, bundle);
  }
  throw InputError("corrupt valuation kind");
}

std::vector<Rational> value_table(const Instance& instance, int agent, const SignalProfile& profile,
                                  const Budgets& budgets) {
  if (agent < 0 || agent >= instance.n) throw InputError("agent index out of range");
  instance.check_profile(profile);
  if (instance.m > budgets.max_subset_bits)
    throw ResourceError("2^m bundle scan over m=" + std::to_string(instance.m) +
                        " items exceeds the subset budget of 2^" +
                        std::to_string(budgets.max_subset_bits));

  const std::size_t size = std::size_t{1} << instance.m;
  const Valuation& v = instance.valuations[static_cast<std::size_t>(agent)];
  std::vector<Rational> values(size);

  auto additive_fill = [&](const std::vector<Expr>& exprs, std::vector<Rational>& out) {
    std::vector<Rational> item_values(static_cast<std::size_t>(instance.m));
    for (int j = 0; j < instance.m; ++j)
      item_values[static_cast<std::size_t>(j)] =
          eval_expr(exprs[static_cast<std::size_t>(j)], instance.spaces, profile);
    out[0] = 0;
    for (std::size_t mask = 1; mask < size; ++mask) {
      int low = std::countr_zero(mask);
      out[mask] = out[mask & (mask - 1)] + item_values[static_cast<std::size_t>(low)];
    }
  };

  switch (v.kind) {
    case Valuation::Kind::Additive:
      additive_fill(v.items, values);
      return values;
    case Valuation::Kind::Xos: {
      std::vector<Rational> clause_values(size);
      bool first = true;
      for (const auto& clause : v.clauses) {
        additive_fill(clause, clause_values);
        if (first) {
          values = clause_values;
          first = false;
        } else {
          for (std::size_t mask = 0; mask < size; ++mask)
            if (clause_values[mask] > values[mask]) values[mask] = clause_values[mask];
        }
      }
      return values;
    }
    case Valuation::Kind::Table:
      return v.table[instance.flatten_profile(profile)];
    case Valuation::Kind::SetCover: {
      for (std::size_t mask = 0; mask < size; ++mask)
        values[mask] = set_cover_value(v.setcover_k, Bundle(mask));
      return values;
    }
  }
  throw InputError("corrupt valuation kind");
}

SignalProfile perceived_profile(const Instance& instance, int agent, int true_signal,
                                const ReportProfile& reports) {
  if (agent < 0 || agent >= instance.n) throw InputError("agent index out of range");
  if (static_cast<int>(reports.size()) != instance.n)
    throw InputError("report profile length does not match n");
  SignalProfile profile(static_cast<std::size_t>(instance.n));
  for (int i = 0; i < instance.n; ++i) profile[static_cast<std::size_t>(i)] = reports[static_cast<std::size_t>(i)].signal;
  profile[static_cast<std::size_t>(agent)] = true_signal;
  instance.check_profile(profile);
  return profile;
}

}  // namespace idv
