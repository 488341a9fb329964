#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "idv/budgets.hpp"
#include "idv/instance.hpp"
#include "idv/lp.hpp"

namespace idv {

enum class FairnessNotion { EF, EF1, EFX, PROP, MMS, APS };

FairnessNotion parse_notion(const std::string& name);
std::string notion_name(FairnessNotion notion);
bool is_envy_notion(FairnessNotion notion);

struct EnvyWitness {
  int agent = 0;
  int rival = 0;
  std::optional<int> blocking_item;  // EFX: a removal that still leaves envy
};

/// Envy check for one agent against every rival, evaluated at eval_profile.
/// EF1 passes vacuously against empty rival bundles.
std::pair<bool, std::optional<EnvyWitness>> envy_check(const Instance& instance,
                                                       const Allocation& allocation, int agent,
                                                       const SignalProfile& eval_profile,
                                                       FairnessNotion notion);

Rational prop_share(const Instance& instance, int agent, const SignalProfile& eval_profile);

/// Exact maximin share by enumeration of all partitions of M into n parts.
/// Requires equal entitlements.
Rational mms_share(const Instance& instance, int agent, const SignalProfile& eval_profile,
                   const Budgets& budgets = {});

/// Exact AnyPrice share via the descending threshold scan: the largest bundle
/// value z for which no price vector makes every z-valuable set strictly cost
/// more than the entitlement.
Rational aps_share(const Instance& instance, int agent, const SignalProfile& eval_profile,
                   const Rational& entitlement, const Budgets& budgets = {});

struct ApsCertificate {
  Rational value;
  // Witness prices for the smallest rejected threshold: every bundle worth
  // rejected_threshold or more costs more than the entitlement under them.
  std::optional<Rational> rejected_threshold;
  std::vector<Rational> rejection_prices;
};

ApsCertificate aps_share_certified(const Instance& instance, int agent,
                                   const SignalProfile& eval_profile, const Rational& entitlement,
                                   const Budgets& budgets = {});

/// Table-level cores, shared with the mechanisms. `values` is indexed by
/// bundle mask and must have size 2^m.
Rational mms_from_values(const std::vector<Rational>& values, int n, int m, const Budgets& budgets = {});
Rational two_part_mms(const std::vector<Rational>& values, int m);
ApsCertificate aps_from_values(const std::vector<Rational>& values, int m, const Rational& entitlement,
                               const Budgets& budgets = {});

/// The balanced cut for a monotone valuation: the lexicographically smallest
/// T* with v(T*) >= v(M \ T*), v(M \ T*) equal to the two-part maximin value,
/// and v(T* \ {j}) <= v(M \ T*) for every j in T*. Such a set exists for
/// every monotone valuation.
Bundle mms_balanced_cut(const std::vector<Rational>& values, int m);
Bundle mms_balanced_cut(const BundleValuation& valuation, int m, const Budgets& budgets = {});

struct FairnessEntry {
  bool holds = true;
  Rational value;                  // the agent's value for her own bundle
  std::optional<Rational> share;   // PROP / MMS / APS threshold
  std::optional<EnvyWitness> witness;
};

struct FairnessReport {
  // results[notion][agent]
  std::map<FairnessNotion, std::vector<FairnessEntry>> results;

  bool all(FairnessNotion notion) const;
  bool all() const;
};

/// Evaluates each requested notion for each agent, agent i judged at her own
/// evaluation profile. Share notions compare v_i(profile_i, A_i) against the
/// share computed at profile_i.
FairnessReport audit(const Instance& instance, const Allocation& allocation,
                     const std::vector<SignalProfile>& per_agent_profiles,
                     const std::set<FairnessNotion>& notions, const Budgets& budgets = {});

}  // namespace idv
