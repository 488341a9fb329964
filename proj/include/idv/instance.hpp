#pragma once

#include <cstdint>
#include <vector>

#include "idv/budgets.hpp"
#include "idv/bundle.hpp"
#include "idv/rational.hpp"
#include "idv/signals.hpp"
#include "idv/valuation.hpp"

namespace idv {

/// A fair-division instance: n agents, m items, entitlements summing to 1,
/// finite per-agent signal spaces, and one public valuation per agent.
struct Instance {
  int n = 0;
  int m = 0;
  std::vector<Rational> entitlements;
  std::vector<SignalSpace> spaces;
  std::vector<Valuation> valuations;

  void validate() const;
  bool equal_entitlements() const;

  std::size_t space_size(int agent) const { return spaces[static_cast<std::size_t>(agent)].size(); }

  /// Number of signal profiles, saturating at 2^63 on overflow.
  std::uint64_t profile_count() const;

  /// Profiles flatten lexicographically: agent 0 is most significant, and
  /// signals follow their declared order. Table valuation rows use the same
  /// index.
  std::uint64_t flatten_profile(const SignalProfile& profile) const;
  SignalProfile unflatten_profile(std::uint64_t flat) const;

  void check_profile(const SignalProfile& profile) const;
};

/// One agent's report: her own signal plus the mechanism-specific bid,
/// encoded as a flat index into that mechanism's bid space.
struct Report {
  int signal = 0;
  std::int64_t bid = 0;

  bool operator==(const Report&) const = default;
  auto operator<=>(const Report&) const = default;
};

using ReportProfile = std::vector<Report>;

/// v_agent(profile, bundle), exact.
Rational eval_value(const Instance& instance, int agent, const SignalProfile& profile, Bundle bundle);

/// All 2^m bundle values of one agent at a fixed profile, indexed by mask.
std::vector<Rational> value_table(const Instance& instance, int agent, const SignalProfile& profile,
                                  const Budgets& budgets = {});

/// The profile an agent evaluates her utility with: everyone else's reported
/// signal, her own true one.
SignalProfile perceived_profile(const Instance& instance, int agent, int true_signal,
                                const ReportProfile& reports);

}  // namespace idv
