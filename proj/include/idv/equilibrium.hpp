#pragma once

#include <optional>
#include <set>
#include <vector>

#include "idv/fairness.hpp"
#include "idv/instance.hpp"
#include "idv/mechanisms.hpp"

namespace idv {

/// Outcome of a pure-Nash check. A negative verdict carries a replayable
/// deviation: re-running the mechanism on it reproduces the claimed strictly
/// better value.
struct PneCertificate {
  bool is_pne = false;
  Allocation equilibrium_allocation;
  // Populated when is_pne is false:
  int deviating_agent = -1;
  Report deviation;
  Rational gap;  // strictly positive improvement at the perceived profile
  Allocation deviation_allocation;
};

/// Exhaustively checks every agent's every (signal, bid) deviation. Both
/// sides of each comparison are evaluated at the same perceived profile
/// (others' reported signals, own true signal).
PneCertificate verify_pne(Mechanism& mechanism, const Instance& instance,
                          const SignalProfile& true_signals, const ReportProfile& reports,
                          const Budgets& budgets = {});

/// All pure Nash equilibria of the full report space, in lexicographic order
/// (agent-major; signal before bid), each with its induced allocation.
std::vector<std::pair<ReportProfile, Allocation>> enumerate_pne(Mechanism& mechanism,
                                                                const Instance& instance,
                                                                const SignalProfile& true_signals,
                                                                const Budgets& budgets = {});

struct EquilibriumAudit {
  bool exists_fair_pne = false;
  bool all_pne_fair = true;
  std::size_t pne_count = 0;
  std::optional<std::pair<ReportProfile, Allocation>> fair_witness;
  std::optional<std::pair<ReportProfile, Allocation>> unfair_witness;
  std::optional<FairnessReport> unfair_report;
};

/// Enumerates equilibria and audits each allocation at the true signals.
EquilibriumAudit audit_equilibria(Mechanism& mechanism, const Instance& instance,
                                  const SignalProfile& true_signals,
                                  const std::set<FairnessNotion>& notions,
                                  const Budgets& budgets = {});

}  // namespace idv
