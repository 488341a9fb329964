#include "idv/fairness.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <limits>
#include <numeric>

#include "idv/errors.hpp"

namespace idv {

FairnessNotion parse_notion(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "ef") return FairnessNotion::EF;
  if (lower == "ef1") return FairnessNotion::EF1;
  if (lower == "efx") return FairnessNotion::EFX;
  if (lower == "prop") return FairnessNotion::PROP;
  if (lower == "mms") return FairnessNotion::MMS;
  if (lower == "aps") return FairnessNotion::APS;
  throw InputError("unknown fairness notion: '" + name + "'");
}

std::string notion_name(FairnessNotion notion) {
  switch (notion) {
    case FairnessNotion::EF: return "ef";
    case FairnessNotion::EF1: return "ef1";
    case FairnessNotion::EFX: return "efx";
    case FairnessNotion::PROP: return "prop";
    case FairnessNotion::MMS: return "mms";
    case FairnessNotion::APS: return "aps";
  }
  return "?";
}

bool is_envy_notion(FairnessNotion notion) {
  return notion == FairnessNotion::EF || notion == FairnessNotion::EF1 ||
         notion == FairnessNotion::EFX;
}

std::pair<bool, std::optional<EnvyWitness>> envy_check(const Instance& instance,
                                                       const Allocation& allocation, int agent,
                                                       const SignalProfile& eval_profile,
                                                       FairnessNotion notion) {
  if (!is_envy_notion(notion)) throw InputError("envy_check expects EF, EF1 or EFX");
  allocation.validate(instance.n, instance.m);
  Rational own = eval_value(instance, agent, eval_profile, allocation[agent]);

  for (int rival = 0; rival < instance.n; ++rival) {
    if (rival == agent) continue;
    const Bundle& theirs = allocation[rival];
    switch (notion) {
      case FairnessNotion::EF:
        if (own < eval_value(instance, agent, eval_profile, theirs))
          return {false, EnvyWitness{agent, rival, {}}};
        break;
      case FairnessNotion::EF1: {
        if (theirs.empty()) break;
        bool some_removal_helps = false;
        for (int item : theirs.items()) {
          if (own >= eval_value(instance, agent, eval_profile, theirs.without(item))) {
            some_removal_helps = true;
            break;
          }
        }
        if (!some_removal_helps) return {false, EnvyWitness{agent, rival, {}}};
        break;
      }
      case FairnessNotion::EFX: {
        for (int item : theirs.items()) {
          if (own < eval_value(instance, agent, eval_profile, theirs.without(item)))
            return {false, EnvyWitness{agent, rival, item}};
        }
        break;
      }
      default:
        break;
    }
  }
  return {true, {}};
}

Rational prop_share(const Instance& instance, int agent, const SignalProfile& eval_profile) {
  return instance.entitlements[static_cast<std::size_t>(agent)] *
         eval_value(instance, agent, eval_profile, Bundle::full(instance.m));
}

namespace {

std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    out *= base;
  }
  return out;
}

// Restricted-growth enumeration of partitions of {0..m-1} into at most n
// unlabeled parts; partitions with fewer than n nonempty parts score 0
// because the remaining parts are empty.
void mms_recurse(const std::vector<Rational>& values, int n, int m, int item,
                 std::vector<std::uint64_t>& parts, Rational& best) {
  if (item == m) {
    if (static_cast<int>(parts.size()) < n) return;  // an empty part caps the min at 0
    Rational low = values[parts[0]];
    for (std::size_t p = 1; p < parts.size(); ++p) low = std::min(low, values[parts[p]]);
    if (low > best) best = low;
    return;
  }
  std::uint64_t bit = std::uint64_t{1} << item;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    parts[p] |= bit;
    mms_recurse(values, n, m, item + 1, parts, best);
    parts[p] &= ~bit;
  }
  if (static_cast<int>(parts.size()) < n) {
    parts.push_back(bit);
    mms_recurse(values, n, m, item + 1, parts, best);
    parts.pop_back();
  }
}

}  // namespace

Rational mms_from_values(const std::vector<Rational>& values, int n, int m, const Budgets& budgets) {
  if (values.size() != (std::size_t{1} << m)) throw InputError("value table must have 2^m entries");
  if (n < 1) throw InputError("partition needs at least one part");
  if (saturating_pow(static_cast<std::uint64_t>(n), m) > budgets.max_partitions)
    throw ResourceError("partition enumeration " + std::to_string(n) + "^" + std::to_string(m) +
                        " exceeds the budget of " + std::to_string(budgets.max_partitions));
  if (m == 0) return 0;
  Rational best = 0;
  std::vector<std::uint64_t> parts;
  parts.reserve(static_cast<std::size_t>(n));
  mms_recurse(values, n, m, 0, parts, best);
  return best;
}

Rational two_part_mms(const std::vector<Rational>& values, int m) {
  if (values.size() != (std::size_t{1} << m)) throw InputError("value table must have 2^m entries");
  std::uint64_t all = Bundle::full(m).bits;
  Rational best = 0;
  for (std::uint64_t mask = 0; mask <= all; ++mask) {
    const Rational& low = std::min(values[mask], values[all & ~mask]);
    if (low > best) best = low;
  }
  return best;
}

Rational mms_share(const Instance& instance, int agent, const SignalProfile& eval_profile,
                   const Budgets& budgets) {
  if (!instance.equal_entitlements())
    throw DomainError("the maximin share is only defined for equal entitlements");
  std::vector<Rational> values = value_table(instance, agent, eval_profile, budgets);
  return mms_from_values(values, instance.n, instance.m, budgets);
}

ApsCertificate aps_from_values(const std::vector<Rational>& values, int m,
                               const Rational& entitlement, const Budgets& budgets) {
  if (values.size() != (std::size_t{1} << m)) throw InputError("value table must have 2^m entries");
  if (m > budgets.max_price_items)
    throw ResourceError("price-space search over m=" + std::to_string(m) +
                        " items exceeds the budget of " + std::to_string(budgets.max_price_items));

  ApsCertificate cert;
  cert.value = 0;
  if (m == 0) return cert;

  // Masks in descending value order; thresholds are exactly the distinct
  // bundle values. A threshold z is feasible for the share iff no price
  // vector makes every bundle worth >= z strictly unaffordable, i.e. iff the
  // strict margin is <= 0. Zero always qualifies since the empty set is free.
  std::vector<std::uint64_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint64_t a, std::uint64_t b) { return values[a] > values[b]; });

  MinimalFamily family;
  std::size_t i = 0;
  while (i < order.size() && values[order[i]] > 0) {
    const Rational& threshold = values[order[i]];
    for (; i < order.size() && values[order[i]] == threshold; ++i) family.insert(Bundle(order[i]));
    MarginResult margin = strict_unaffordability_margin(m, family.sets(), entitlement);
    if (!margin.feasible)
      throw DomainError("internal solver error: threshold margin cannot be infeasible");
    if (margin.margin <= 0) {
      cert.value = threshold;
      return cert;
    }
    cert.rejected_threshold = threshold;
    cert.rejection_prices = margin.prices;
  }
  return cert;
}

Rational aps_share(const Instance& instance, int agent, const SignalProfile& eval_profile,
                   const Rational& entitlement, const Budgets& budgets) {
  return aps_share_certified(instance, agent, eval_profile, entitlement, budgets).value;
}

ApsCertificate aps_share_certified(const Instance& instance, int agent,
                                   const SignalProfile& eval_profile, const Rational& entitlement,
                                   const Budgets& budgets) {
  if (entitlement <= 0 || entitlement >= 1)
    throw DomainError("entitlements lie strictly between 0 and 1");
  if (instance.m > budgets.max_price_items)
    throw ResourceError("price-space search over m=" + std::to_string(instance.m) +
                        " items exceeds the budget of " + std::to_string(budgets.max_price_items));
  Budgets relaxed = budgets;
  relaxed.max_subset_bits = std::max(budgets.max_subset_bits, budgets.max_price_items);
  std::vector<Rational> values = value_table(instance, agent, eval_profile, relaxed);
  return aps_from_values(values, instance.m, entitlement, budgets);
}

Bundle mms_balanced_cut(const std::vector<Rational>& values, int m) {
  if (values.size() != (std::size_t{1} << m)) throw InputError("value table must have 2^m entries");
  Rational target = two_part_mms(values, m);
  std::uint64_t all = Bundle::full(m).bits;
  for (std::uint64_t mask = 0; mask <= all; ++mask) {
    std::uint64_t rest = all & ~mask;
    if (values[rest] != target || values[mask] < values[rest]) continue;
    bool removal_bounded = true;
    for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
      std::uint64_t without = mask & ~(std::uint64_t{1} << std::countr_zero(bits));
      if (values[without] > values[rest]) {
        removal_bounded = false;
        break;
      }
    }
    if (removal_bounded) return Bundle(mask);
  }
  throw DomainError("no balanced cut found; the valuation is not monotone");
}

Bundle mms_balanced_cut(const BundleValuation& valuation, int m, const Budgets& budgets) {
  if (m > budgets.max_subset_bits)
    throw ResourceError("2^m bundle scan over m=" + std::to_string(m) +
                        " items exceeds the subset budget of 2^" +
                        std::to_string(budgets.max_subset_bits));
  std::vector<Rational> values(std::size_t{1} << m);
  for (std::uint64_t mask = 0; mask < values.size(); ++mask) values[mask] = valuation(Bundle(mask));
  return mms_balanced_cut(values, m);
}

bool FairnessReport::all(FairnessNotion notion) const {
  auto it = results.find(notion);
  if (it == results.end()) return true;
  for (const FairnessEntry& entry : it->second)
    if (!entry.holds) return false;
  return true;
}

bool FairnessReport::all() const {
  for (const auto& [notion, entries] : results)
    for (const FairnessEntry& entry : entries)
      if (!entry.holds) return false;
  return true;
}

FairnessReport audit(const Instance& instance, const Allocation& allocation,
                     const std::vector<SignalProfile>& per_agent_profiles,
                     const std::set<FairnessNotion>& notions, const Budgets& budgets) {
  allocation.validate(instance.n, instance.m);
  if (static_cast<int>(per_agent_profiles.size()) != instance.n)
    throw InputError("one evaluation profile per agent is required");

  FairnessReport report;
  for (FairnessNotion notion : notions) {
    std::vector<FairnessEntry> entries(static_cast<std::size_t>(instance.n));
    for (int agent = 0; agent < instance.n; ++agent) {
      const SignalProfile& profile = per_agent_profiles[static_cast<std::size_t>(agent)];
      FairnessEntry& entry = entries[static_cast<std::size_t>(agent)];
      entry.value = eval_value(instance, agent, profile, allocation[agent]);
      if (is_envy_notion(notion)) {
        auto [holds, witness] = envy_check(instance, allocation, agent, profile, notion);
        entry.holds = holds;
        entry.witness = witness;
      } else {
        switch (notion) {
          case FairnessNotion::PROP:
            entry.share = prop_share(instance, agent, profile);
            break;
          case FairnessNotion::MMS:
            entry.share = mms_share(instance, agent, profile, budgets);
            break;
          case FairnessNotion::APS:
            entry.share = aps_share(instance, agent, profile,
                                    instance.entitlements[static_cast<std::size_t>(agent)], budgets);
            break;
          default:
            break;
        }
        entry.holds = entry.value >= *entry.share;
      }
    }
    report.results.emplace(notion, std::move(entries));
  }
  return report;
}

}  // namespace idv
