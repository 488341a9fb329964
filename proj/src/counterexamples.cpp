#include "idv/counterexamples.hpp"

#include <bit>
#include <random>

#include "idv/errors.hpp"

namespace idv {

Instance impossibility_instance(int n, ImpossibilityVariant variant) {
  if (n < 2) throw InputError("impossibility instance needs at least two agents");
  int m = variant == ImpossibilityVariant::MMS ? n * n : 2 * n;
  if (m > kMaxItems) throw ResourceError("impossibility instance needs m=" + std::to_string(m) +
                                         " items; the bundle cap is " + std::to_string(kMaxItems));

  Instance instance;
  instance.n = n;
  instance.m = m;
  instance.entitlements.assign(static_cast<std::size_t>(n), Rational(1, static_cast<unsigned>(n)));

  // Agent 0 holds a full dichotomous signal; signal index == coordinate mask.
  SignalSpace binary;
  binary.kind = SpaceKind::Vectors;
  binary.vectors.reserve(std::size_t{1} << m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<Rational> coords(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) coords[static_cast<std::size_t>(j)] = (mask >> j) & 1;
    binary.vectors.push_back(std::move(coords));
  }
  instance.spaces.push_back(std::move(binary));
  for (int i = 1; i < n; ++i) instance.spaces.push_back(SignalSpace{});

  std::vector<Expr> projection;
  projection.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) projection.push_back(Expr::sig(0, j));
  for (int i = 0; i < n; ++i) instance.valuations.push_back(Valuation::additive(projection));

  instance.validate();
  return instance;
}

SignalProfile adversarial_signal(const Instance& instance, const Allocation& fair_allocation) {
  fair_allocation.validate(instance.n, instance.m);
  if (instance.spaces.empty() || instance.space_size(0) != (std::uint64_t{1} << instance.m))
    throw InputError("adversarial signal requires agent 0's space to be the full binary cube");
  SignalProfile profile(static_cast<std::size_t>(instance.n), 0);
  profile[0] = static_cast<int>(fair_allocation[0].bits);
  return profile;
}

ImpossibilityAudit impossibility_audit(Mechanism& mechanism, int n, ImpossibilityVariant variant,
                                       const Budgets& budgets,
                                       std::optional<SignalProfile> start_signals) {
  ImpossibilityAudit audit_result;
  audit_result.instance = impossibility_instance(n, variant);
  const Instance& instance = audit_result.instance;

  SignalProfile start(static_cast<std::size_t>(n), 0);
  start[0] = static_cast<int>(Bundle::full(instance.m).bits);  // all-ones coordinates
  if (start_signals) start = *start_signals;
  instance.check_profile(start);
  audit_result.start_signals = start;

  FairnessNotion notion =
      variant == ImpossibilityVariant::MMS ? FairnessNotion::MMS : FairnessNotion::EF1;
  std::vector<SignalProfile> start_profiles(static_cast<std::size_t>(n), start);

  // A start signal under which nobody sees any value cannot separate fair
  // from unfair; report it as vacuous instead of chasing the chain.
  bool any_value = false;
  for (int i = 0; i < n && !any_value; ++i)
    any_value = eval_value(instance, i, start, Bundle::full(instance.m)) > 0;
  if (!any_value) {
    audit_result.vacuous = true;
    audit_result.detail = "all valuations are identically zero at the start signal";
    return audit_result;
  }

  audit_result.reports = mechanism.truthful_guess(instance, start);
  MechanismResult outcome = mechanism.run(instance, audit_result.reports);
  audit_result.allocation = outcome.allocation;

  audit_result.report_at_start =
      audit(instance, outcome.allocation, start_profiles, {notion}, budgets);
  audit_result.fair_at_start = audit_result.report_at_start.all();
  if (!audit_result.fair_at_start) {
    audit_result.detail = "the candidate equilibrium allocation is not " + notion_name(notion) +
                          " at the start signal";
    return audit_result;
  }

  audit_result.pne_at_start =
      verify_pne(mechanism, instance, start, audit_result.reports, budgets).is_pne;
  if (!audit_result.pne_at_start) {
    audit_result.detail = "the truthful-guess profile is not an equilibrium at the start signal";
    return audit_result;
  }

  audit_result.adversarial_signals = adversarial_signal(instance, outcome.allocation);
  audit_result.pne_at_adversarial =
      verify_pne(mechanism, instance, audit_result.adversarial_signals, audit_result.reports, budgets)
          .is_pne;
  if (!audit_result.pne_at_adversarial) {
    audit_result.detail = "the report profile stops being an equilibrium at the adversarial signal";
    return audit_result;
  }

  std::vector<SignalProfile> adversarial_profiles(static_cast<std::size_t>(n),
                                                  audit_result.adversarial_signals);
  audit_result.report_at_adversarial =
      audit(instance, outcome.allocation, adversarial_profiles, {notion}, budgets);
  audit_result.unfair_at_adversarial = !audit_result.report_at_adversarial.all();
  if (!audit_result.unfair_at_adversarial) {
    audit_result.detail = "the allocation stays " + notion_name(notion) +
                          " at the adversarial signal";
    return audit_result;
  }

  // Any agent whose bundle avoids agent 0's bundle values it at exactly zero
  // under the adversarial signal.
  for (int i = 1; i < n; ++i) {
    if (outcome.allocation[i].intersect(outcome.allocation[0]).empty() &&
        eval_value(instance, i, audit_result.adversarial_signals, outcome.allocation[i]) != 0)
      throw DomainError("internal audit error: disjoint bundle with nonzero adversarial value");
  }

  audit_result.reproduced = true;
  return audit_result;
}

Instance xos_gap_instance() {
  auto indicator_clause = [](std::initializer_list<int> ones) {
    std::vector<Expr> clause(4, Expr::constant(0));
    for (int j : ones) clause[static_cast<std::size_t>(j)] = Expr::constant(1);
    return clause;
  };

  Instance instance;
  instance.n = 2;
  instance.m = 4;
  instance.entitlements = {Rational(1, 2), Rational(1, 2)};
  instance.spaces = {SignalSpace{}, SignalSpace{}};
  // Goods a,b,c,d = 0,1,2,3: one agent pairs {a,b} with {c,d}, the other
  // {a,d} with {b,c}.
  instance.valuations.push_back(
      Valuation::xos({indicator_clause({0, 1}), indicator_clause({2, 3})}));
  instance.valuations.push_back(
      Valuation::xos({indicator_clause({0, 3}), indicator_clause({1, 2})}));
  instance.validate();
  return instance;
}

XosGapReport xos_mms_gap_check() {
  Instance instance = xos_gap_instance();
  SignalProfile profile{0, 0};
  Budgets budgets;

  XosGapReport report;
  report.mms_agent0 = mms_share(instance, 0, profile, budgets);
  report.mms_agent1 = mms_share(instance, 1, profile, budgets);

  std::vector<Rational> v0 = value_table(instance, 0, profile, budgets);
  std::vector<Rational> v1 = value_table(instance, 1, profile, budgets);
  std::uint64_t all = Bundle::full(instance.m).bits;
  for (std::uint64_t mask = 0; mask <= all; ++mask) {
    if (v0[mask] >= report.mms_agent0 && v1[all & ~mask] >= report.mms_agent1) {
      report.double_mms_allocation = Allocation({Bundle(mask), Bundle(all & ~mask)});
      report.verified = false;
      return report;
    }
  }
  report.verified = report.mms_agent0 == 2 && report.mms_agent1 == 2;
  return report;
}

SubadditiveApsReport subadditive_incompatibility_check(int k, std::uint64_t random_bundles,
                                                       std::uint64_t random_prices,
                                                       std::uint64_t seed) {
  const SetCoverFamily& family = set_cover_family(k);
  const int m = family.item_count();
  const std::uint64_t all = Bundle::full(m).bits;
  const Rational target(k);

  SubadditiveApsReport report;
  report.k = k;
  report.prop = Rational(k, 2);
  report.aps_lower = Rational(k - 2);

  std::mt19937_64 rng(seed);

  // (a) complement identity on canonical bundles plus seeded random ones.
  auto complement_ok = [&](Bundle t) {
    ++report.bundle_checks;
    return family.value(t) + family.value(complement(t, m)) == target;
  };
  report.complement_identity_ok = complement_ok(Bundle(0)) && complement_ok(Bundle(all));
  for (int u = 1; u <= family.family_size() && report.complement_identity_ok; ++u)
    report.complement_identity_ok = complement_ok(family.cover_set(static_cast<std::uint64_t>(u)));
  for (std::uint64_t i = 0; i < random_bundles && report.complement_identity_ok; ++i)
    report.complement_identity_ok = complement_ok(Bundle(rng() & all));
  if (!report.complement_identity_ok) report.failure = "complement identity v(T) + v(M\\T) = k failed";

  // (b) + averaging: every cover-set complement costs (m-1)/2 in total, so
  // for any price vector some rim costs at most (m-1)/2m; dropping its
  // priciest good leaves an affordable bundle of value exactly k-2. Prices
  // are integer grids, so everything stays exact.
  report.witness_construction_ok = true;
  report.averaging_identity_ok = true;
  const Rational average_bound(static_cast<unsigned>(m) - 1, 2 * static_cast<unsigned>(m));
  const Rational half(1, 2);
  for (std::uint64_t round = 0; round < random_prices; ++round) {
    ++report.price_checks;
    std::vector<Rational> prices(static_cast<std::size_t>(m));
    Rational total = 0;
    for (int j = 0; j < m; ++j) {
      prices[static_cast<std::size_t>(j)] = Rational(rng() % 1000);
      total += prices[static_cast<std::size_t>(j)];
    }
    if (total == 0) {
      prices.assign(static_cast<std::size_t>(m), Rational(1, static_cast<unsigned>(m)));
    } else {
      for (Rational& p : prices) p /= total;
    }

    auto price_of = [&](Bundle b) {
      Rational sum = 0;
      for (std::uint64_t bits = b.bits; bits != 0; bits &= bits - 1)
        sum += prices[static_cast<std::size_t>(std::countr_zero(bits))];
      return sum;
    };

    Rational rim_sum = 0;
    int chosen = 0;
    Rational chosen_price;
    for (int u = 1; u <= family.family_size(); ++u) {
      Bundle rim = complement(family.cover_set(static_cast<std::uint64_t>(u)), m);
      Rational price = price_of(rim);
      rim_sum += price;
      if (chosen == 0 && price <= average_bound) {
        chosen = u;
        chosen_price = price;
      }
    }
    if (rim_sum != Rational(static_cast<unsigned>(m) - 1, 2)) {
      report.averaging_identity_ok = false;
      report.failure = "averaging identity over the cover family failed";
      break;
    }
    if (chosen == 0) {
      report.witness_construction_ok = false;
      report.failure = "no cover-set complement priced within the average bound";
      break;
    }

    Bundle rim = complement(family.cover_set(static_cast<std::uint64_t>(chosen)), m);
    int priciest = -1;
    Rational priciest_price;
    for (int item : rim.items()) {
      const Rational& p = prices[static_cast<std::size_t>(item)];
      if (priciest < 0 || p > priciest_price) {
        priciest = item;
        priciest_price = p;
      }
    }
    Bundle witness = rim.without(priciest);
    if (price_of(witness) > half || family.value(witness) != Rational(k - 2)) {
      report.witness_construction_ok = false;
      report.failure = "affordable witness bundle of value k-2 not found";
      break;
    }
  }

  // (c) arithmetic separation: total value k stays below PROP + APS.
  report.separation_ok = target < report.prop + report.aps_lower;
  if (!report.separation_ok && report.failure.empty())
    report.failure = "separation k < k/2 + (k-2) failed";

  report.all_passed = report.complement_identity_ok && report.witness_construction_ok &&
                      report.averaging_identity_ok && report.separation_ok;
  return report;
}

}  // namespace idv
