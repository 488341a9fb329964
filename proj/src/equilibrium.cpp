#include "idv/equilibrium.hpp"

#include <limits>
#include <map>

#include "idv/errors.hpp"

namespace idv {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t deviation_total(const Mechanism& mechanism, const Instance& instance) {
  std::uint64_t total = 0;
  for (int i = 0; i < instance.n; ++i) {
    std::uint64_t options =
        saturating_mul(instance.space_size(i), mechanism.bid_count(instance, i));
    total += options;
    if (total < options) return std::numeric_limits<std::uint64_t>::max();
  }
  return total;
}

}  // namespace

PneCertificate verify_pne(Mechanism& mechanism, const Instance& instance,
                          const SignalProfile& true_signals, const ReportProfile& reports,
                          const Budgets& budgets) {
  mechanism.check_instance(instance);
  instance.check_profile(true_signals);
  std::uint64_t total = deviation_total(mechanism, instance);
  if (total > budgets.max_profiles)
    throw ResourceError("deviation space of size " + std::to_string(total) +
                        " exceeds the budget of " + std::to_string(budgets.max_profiles));

  MechanismResult base = mechanism.run(instance, reports);

  PneCertificate certificate;
  certificate.equilibrium_allocation = base.allocation;

  for (int agent = 0; agent < instance.n; ++agent) {
    // Utility is evaluated at the perceived profile: others' reported
    // signals, the deviator's true one. The profile is the same on both
    // sides of every comparison.
    SignalProfile perceived = perceived_profile(
        instance, agent, true_signals[static_cast<std::size_t>(agent)], reports);
    Rational base_utility = eval_value(instance, agent, perceived, base.allocation[agent]);

    ReportProfile deviated = reports;
    std::uint64_t signals = instance.space_size(agent);
    std::uint64_t bids = mechanism.bid_count(instance, agent);
    for (std::uint64_t signal = 0; signal < signals; ++signal) {
      for (std::uint64_t bid = 0; bid < bids; ++bid) {
        Report candidate{static_cast<int>(signal), static_cast<std::int64_t>(bid)};
        if (candidate == reports[static_cast<std::size_t>(agent)]) continue;
        deviated[static_cast<std::size_t>(agent)] = candidate;
        MechanismResult outcome = mechanism.run(instance, deviated);
        Rational utility = eval_value(instance, agent, perceived, outcome.allocation[agent]);
        if (utility > base_utility) {
          certificate.is_pne = false;
          certificate.deviating_agent = agent;
          certificate.deviation = candidate;
          certificate.gap = utility - base_utility;
          certificate.deviation_allocation = outcome.allocation;
          return certificate;
        }
      }
    }
  }
  certificate.is_pne = true;
  return certificate;
}

std::vector<std::pair<ReportProfile, Allocation>> enumerate_pne(Mechanism& mechanism,
                                                                const Instance& instance,
                                                                const SignalProfile& true_signals,
                                                                const Budgets& budgets) {
  mechanism.check_instance(instance);
  instance.check_profile(true_signals);

  std::uint64_t product = 1;
  for (int i = 0; i < instance.n; ++i)
    product = saturating_mul(
        product, saturating_mul(instance.space_size(i), mechanism.bid_count(instance, i)));
  if (product > budgets.max_profiles)
    throw ResourceError("report space of size " + std::to_string(product) +
                        " exceeds the budget of " + std::to_string(budgets.max_profiles));

  // Mechanisms are deterministic, so outputs are cached by report profile;
  // every deviation lookup lands back in the enumerated space.
  std::map<ReportProfile, Allocation> outputs;
  auto allocation_of = [&](const ReportProfile& reports) -> const Allocation& {
    auto it = outputs.find(reports);
    if (it == outputs.end())
      it = outputs.emplace(reports, mechanism.run(instance, reports).allocation).first;
    return it->second;
  };

  std::vector<SignalProfile> perceived(static_cast<std::size_t>(instance.n));

  std::vector<std::pair<ReportProfile, Allocation>> equilibria;
  ReportProfile reports(static_cast<std::size_t>(instance.n));
  // Lexicographic enumeration: agent-major, signal before bid.
  auto advance = [&]() {
    for (int i = instance.n - 1; i >= 0; --i) {
      Report& r = reports[static_cast<std::size_t>(i)];
      if (static_cast<std::uint64_t>(r.bid) + 1 < mechanism.bid_count(instance, i)) {
        ++r.bid;
        return true;
      }
      r.bid = 0;
      if (static_cast<std::uint64_t>(r.signal) + 1 < instance.space_size(i)) {
        ++r.signal;
        return true;
      }
      r.signal = 0;
    }
    return false;
  };

  do {
    const Allocation& base = allocation_of(reports);
    bool is_pne = true;
    for (int agent = 0; agent < instance.n && is_pne; ++agent) {
      SignalProfile profile = perceived_profile(
          instance, agent, true_signals[static_cast<std::size_t>(agent)], reports);
      Rational base_utility = eval_value(instance, agent, profile, base[agent]);
      ReportProfile deviated = reports;
      std::uint64_t signals = instance.space_size(agent);
      std::uint64_t bids = mechanism.bid_count(instance, agent);
      for (std::uint64_t signal = 0; signal < signals && is_pne; ++signal) {
        for (std::uint64_t bid = 0; bid < bids; ++bid) {
          Report candidate{static_cast<int>(signal), static_cast<std::int64_t>(bid)};
          if (candidate == reports[static_cast<std::size_t>(agent)]) continue;
          deviated[static_cast<std::size_t>(agent)] = candidate;
          if (eval_value(instance, agent, profile, allocation_of(deviated)[agent]) > base_utility) {
            is_pne = false;
            break;
          }
        }
      }
    }
    if (is_pne) equilibria.emplace_back(reports, base);
  } while (advance());

  return equilibria;
}

EquilibriumAudit audit_equilibria(Mechanism& mechanism, const Instance& instance,
                                  const SignalProfile& true_signals,
                                  const std::set<FairnessNotion>& notions, const Budgets& budgets) {
  EquilibriumAudit result;
  auto equilibria = enumerate_pne(mechanism, instance, true_signals, budgets);
  result.pne_count = equilibria.size();

  std::vector<SignalProfile> profiles(static_cast<std::size_t>(instance.n), true_signals);
  for (const auto& [reports, allocation] : equilibria) {
    FairnessReport report = audit(instance, allocation, profiles, notions, budgets);
    bool fair = report.all();
    if (fair && !result.fair_witness) {
      result.exists_fair_pne = true;
      result.fair_witness = {reports, allocation};
    }
    if (!fair && !result.unfair_witness) {
      result.all_pne_fair = false;
      result.unfair_witness = {reports, allocation};
      result.unfair_report = std::move(report);
    }
  }
  return result;
}

}  // namespace idv
