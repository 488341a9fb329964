#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idv/equilibrium.hpp"
#include "idv/instance.hpp"
#include "idv/mechanisms.hpp"
#include "idv/setcover.hpp"

namespace idv {

enum class ImpossibilityVariant { MMS, EF1 };

/// The dichotomous-signal family: m = n^2 (MMS) or m = 2n (EF1) goods, agent
/// 0's signal space is {0,1}^m (signal index == coordinate mask), every other
/// space is a singleton, and all agents value item j at agent 0's j-th
/// coordinate.
Instance impossibility_instance(int n, ImpossibilityVariant variant);

/// The signal profile whose agent-0 coordinates are the indicator of the
/// first agent's bundle.
SignalProfile adversarial_signal(const Instance& instance, const Allocation& fair_allocation);

struct ImpossibilityAudit {
  bool reproduced = false;
  bool vacuous = false;       // no agent sees any value at the start signal
  bool fair_at_start = false;
  bool pne_at_start = false;
  bool pne_at_adversarial = false;
  bool unfair_at_adversarial = false;
  Instance instance;
  SignalProfile start_signals;
  SignalProfile adversarial_signals;
  ReportProfile reports;
  Allocation allocation;
  FairnessReport report_at_start;
  FairnessReport report_at_adversarial;
  std::string detail;
};

/// Runs the negative-result chain against a concrete mechanism: a fair PNE at
/// the all-ones signal, the same report profile still a PNE after agent 0's
/// signal collapses to the indicator of the first bundle, and the allocation
/// no longer fair there. Failure of any link is reported, not thrown. Starts
/// whose valuations are identically zero are flagged vacuous and count as not
/// reproduced.
ImpossibilityAudit impossibility_audit(Mechanism& mechanism, int n, ImpossibilityVariant variant,
                                       const Budgets& budgets = {},
                                       std::optional<SignalProfile> start_signals = {});

/// The fixed four-good instance with two XOS valuations whose maximin shares
/// are both 2 while no allocation reaches 2 for both agents.
Instance xos_gap_instance();

struct XosGapReport {
  bool verified = false;
  Rational mms_agent0;
  Rational mms_agent1;
  std::optional<Allocation> double_mms_allocation;  // present only when not verified
};

XosGapReport xos_mms_gap_check();

struct SubadditiveApsReport {
  bool all_passed = false;
  int k = 0;
  std::uint64_t bundle_checks = 0;
  std::uint64_t price_checks = 0;
  bool complement_identity_ok = false;
  bool witness_construction_ok = false;
  bool averaging_identity_ok = false;
  bool separation_ok = false;
  Rational prop;          // k/2
  Rational aps_lower;     // k-2, from the constructive witness
  std::string failure;
};

/// Checks the share-separation facts of the set-cover valuation on seeded
/// random bundles and price vectors: the complement identity
/// v(T) + v(M\T) = k, the constructive affordable bundle of value k-2 for
/// every price vector, the exact averaging identity over the cover family,
/// and the arithmetic separation k < k/2 + (k-2).
SubadditiveApsReport subadditive_incompatibility_check(int k, std::uint64_t random_bundles,
                                                       std::uint64_t random_prices,
                                                       std::uint64_t seed);

}  // namespace idv
