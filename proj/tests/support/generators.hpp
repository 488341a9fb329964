#pragma once

// Seeded random instance generators shared by the test and acceptance
// suites. Everything is driven by raw mt19937_64 draws so runs are identical
// across platforms.

#include <cstdint>
#include <random>
#include <vector>

#include "idv/instance.hpp"

namespace idv::testgen {

using Rng = std::mt19937_64;

inline std::uint64_t pick(Rng& rng, std::uint64_t bound) { return rng() % bound; }

inline Rational small_rational(Rng& rng, std::uint64_t max_num = 4, std::uint64_t max_den = 3) {
  return Rational(pick(rng, max_num + 1), 1 + pick(rng, max_den));
}

inline SignalSpace random_vector_space(Rng& rng, int m, int max_signals) {
  SignalSpace space;
  space.kind = SpaceKind::Vectors;
  int signals = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(max_signals)));
  for (int s = 0; s < signals; ++s) {
    std::vector<Rational> coords(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) coords[static_cast<std::size_t>(j)] = small_rational(rng);
    space.vectors.push_back(std::move(coords));
  }
  return space;
}

/// A random item expression over the two agents' coordinates for item j.
/// `owner < 0` allows references to every agent, otherwise only sig(owner, .)
/// appears (the independent-values embedding).
inline Expr random_item_expr(Rng& rng, int n, int j, int owner) {
  auto source = [&]() {
    int agent = owner >= 0 ? owner : static_cast<int>(pick(rng, static_cast<std::uint64_t>(n)));
    return Expr::sig(agent, j);
  };
  switch (pick(rng, 6)) {
    case 0:
      return Expr::constant(small_rational(rng));
    case 1:
      return source();
    case 2:
      return Expr::add({source(), Expr::constant(small_rational(rng))});
    case 3:
      return Expr::add({Expr::scale(small_rational(rng), source()), source()});
    case 4:
      return Expr::min({source(), source()});
    default:
      return Expr::max({source(), Expr::scale(small_rational(rng), source())});
  }
}

inline Valuation random_additive(Rng& rng, int n, int m, int owner = -1) {
  std::vector<Expr> items;
  items.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) items.push_back(random_item_expr(rng, n, j, owner));
  return Valuation::additive(std::move(items));
}

inline Valuation random_xos(Rng& rng, int n, int m, int max_clauses = 3) {
  int clauses = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(max_clauses)));
  std::vector<std::vector<Expr>> parsed;
  for (int c = 0; c < clauses; ++c) {
    std::vector<Expr> clause;
    clause.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) clause.push_back(random_item_expr(rng, n, j, -1));
    parsed.push_back(std::move(clause));
  }
  return Valuation::xos(std::move(parsed));
}

/// Monotone normalized table: each bundle value is the best one-item-smaller
/// value plus a nonnegative increment.
inline Valuation random_monotone_table(Rng& rng, std::uint64_t profile_rows, int m) {
  std::vector<std::vector<Rational>> table;
  const std::size_t size = std::size_t{1} << m;
  for (std::uint64_t row = 0; row < profile_rows; ++row) {
    std::vector<Rational> values(size);
    for (std::size_t mask = 1; mask < size; ++mask) {
      Rational base = 0;
      for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
        std::size_t smaller = mask & ~(std::uint64_t{1} << std::countr_zero(bits));
        if (values[smaller] > base) base = values[smaller];
      }
      values[mask] = base + Rational(pick(rng, 3), 1 + pick(rng, 2));
    }
    table.push_back(std::move(values));
  }
  return Valuation::from_table(std::move(table));
}

struct InstanceOptions {
  int n = 2;
  int m = 4;
  int max_signals = 4;
  bool allow_table = true;
  bool allow_xos = false;
  bool xos_agent0 = false;    // force a clause-form valuation for agent 0
  bool independent = false;   // valuations reference only the owner's signal
  std::vector<Rational> entitlements;  // equal when empty
};

inline Instance random_instance(Rng& rng, const InstanceOptions& options) {
  Instance instance;
  instance.n = options.n;
  instance.m = options.m;
  if (options.entitlements.empty())
    instance.entitlements.assign(static_cast<std::size_t>(options.n),
                                 Rational(1, static_cast<unsigned>(options.n)));
  else
    instance.entitlements = options.entitlements;

  for (int i = 0; i < options.n; ++i)
    instance.spaces.push_back(random_vector_space(rng, options.m, options.max_signals));

  for (int i = 0; i < options.n; ++i) {
    int owner = options.independent ? i : -1;
    bool force_xos = options.xos_agent0 && i == 0;
    std::uint64_t kind = pick(rng, 3);
    if (force_xos || (options.allow_xos && kind == 2)) {
      instance.valuations.push_back(random_xos(rng, options.n, options.m));
    } else if (options.allow_table && kind == 1 && !options.independent) {
      instance.valuations.push_back(
          random_monotone_table(rng, instance.profile_count(), options.m));
    } else {
      instance.valuations.push_back(random_additive(rng, options.n, options.m, owner));
    }
  }
  // Table rows depend on the full profile count, so they must be generated
  // after every space exists; rebuild if a later space changed the count.
  for (Valuation& v : instance.valuations)
    if (v.kind == Valuation::Kind::Table &&
        v.table.size() != instance.profile_count())
      v = random_monotone_table(rng, instance.profile_count(), options.m);

  instance.validate();
  return instance;
}

/// Signal-free additive instance with fixed integer item values.
inline Instance const_additive(std::vector<std::vector<int>> values,
                               std::vector<Rational> entitlements = {}) {
  Instance instance;
  instance.n = static_cast<int>(values.size());
  instance.m = static_cast<int>(values.front().size());
  instance.entitlements = entitlements.empty()
                              ? std::vector<Rational>(static_cast<std::size_t>(instance.n),
                                                      Rational(1, static_cast<unsigned>(instance.n)))
                              : std::move(entitlements);
  instance.spaces.assign(static_cast<std::size_t>(instance.n), SignalSpace{});
  for (const auto& agent_values : values) {
    std::vector<Expr> items;
    for (int v : agent_values) items.push_back(Expr::constant(Rational(v)));
    instance.valuations.push_back(Valuation::additive(std::move(items)));
  }
  instance.validate();
  return instance;
}

inline SignalProfile random_profile(Rng& rng, const Instance& instance) {
  SignalProfile profile(static_cast<std::size_t>(instance.n));
  for (int i = 0; i < instance.n; ++i)
    profile[static_cast<std::size_t>(i)] =
        static_cast<int>(pick(rng, instance.space_size(i)));
  return profile;
}

/// The four-good instance with identical unit values for both agents, driven
/// by agent 0's signal; space includes the all-ones signal (index 0) and a
/// half-ones signal (index 1).
inline Instance unit_values_instance() {
  Instance instance;
  instance.n = 2;
  instance.m = 4;
  instance.entitlements = {Rational(1, 2), Rational(1, 2)};
  SignalSpace space;
  space.kind = SpaceKind::Vectors;
  space.vectors = {
      {Rational(1), Rational(1), Rational(1), Rational(1)},
      {Rational(1), Rational(1), Rational(0), Rational(0)},
  };
  instance.spaces = {space, SignalSpace{}};
  std::vector<Expr> projection;
  for (int j = 0; j < 4; ++j) projection.push_back(Expr::sig(0, j));
  instance.valuations = {Valuation::additive(projection), Valuation::additive(projection)};
  instance.validate();
  return instance;
}

}  // namespace idv::testgen
