#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "idv/budgets.hpp"
#include "idv/fairness.hpp"
#include "idv/instance.hpp"

namespace idv {

struct CutAndChooseTrace {
  std::size_t candidate_count = 0;  // |T(r1,b1)|
  Rational cutter_best;             // xi_1
  Rational cutter_mms;
  bool took_max_branch = false;
  Bundle offered;  // T*
  Bundle chooser_pick;
};

struct PriceAndChooseTrace {
  std::vector<Bundle> candidates;  // T(r1,b1), ascending mask order
  Bundle offered;                  // T*
  std::vector<Rational> prices;    // p*
  bool chooser_kept_offer = false;
  Bundle chooser_pick;
};

struct BlackBoxTrace {
  bool consensus = false;
  std::vector<int> agreeing;  // N'
  int executor = -1;          // i*
  std::vector<int> consensus_bid;
  bool used_default = false;
};

using MechanismTrace =
    std::variant<std::monostate, CutAndChooseTrace, PriceAndChooseTrace, BlackBoxTrace>;

struct MechanismResult {
  Allocation allocation;
  MechanismTrace trace;
};

/// A deterministic map from reports to allocations. Bids are flat indices
/// into the mechanism's per-agent bid space; identical reports always yield
/// identical allocations and traces. Stage results are memoized, so run() is
/// non-const; one mechanism object should not be shared across threads.
class Mechanism {
public:
  virtual ~Mechanism() = default;

  virtual std::string name() const = 0;
  virtual void check_instance(const Instance& instance) const = 0;
  virtual std::uint64_t bid_count(const Instance& instance, int agent) const = 0;
  virtual MechanismResult run(const Instance& instance, const ReportProfile& reports) = 0;

  /// The canonical profile where everyone reports truthfully and guesses
  /// everyone else's signal correctly.
  virtual ReportProfile truthful_guess(const Instance& instance, const SignalProfile& s) const = 0;

  void check_reports(const Instance& instance, const ReportProfile& reports) const;
};

/// Two agents, equal entitlements. The cutter's report partitions the goods;
/// the chooser takes the side she prefers, ties resolved toward the offered
/// side.
class CutAndChoose final : public Mechanism {
public:
  explicit CutAndChoose(Budgets budgets = {}) : budgets_(budgets) {}

  std::string name() const override { return "cut-and-choose"; }
  void check_instance(const Instance& instance) const override;
  std::uint64_t bid_count(const Instance& instance, int agent) const override;
  MechanismResult run(const Instance& instance, const ReportProfile& reports) override;
  ReportProfile truthful_guess(const Instance& instance, const SignalProfile& s) const override;

private:
  struct CutterStage {
    std::size_t candidate_count = 0;
    Rational best;
    Rational mms;
    bool took_max_branch = false;
    Bundle offered;
  };
  const CutterStage& cutter_stage(const Instance& instance, int r1, std::int64_t b1);

  Budgets budgets_;
  std::map<std::pair<int, std::int64_t>, CutterStage> stage_cache_;
};

/// Two agents, arbitrary entitlements. The pricer's report fixes a price
/// vector; the chooser takes her favorite affordable set. All "arbitrary"
/// selections resolve to the lexicographically smallest candidate.
class PriceAndChoose final : public Mechanism {
public:
  explicit PriceAndChoose(Budgets budgets = {}) : budgets_(budgets) {}

  std::string name() const override { return "price-and-choose"; }
  void check_instance(const Instance& instance) const override;
  std::uint64_t bid_count(const Instance& instance, int agent) const override;
  MechanismResult run(const Instance& instance, const ReportProfile& reports) override;
  ReportProfile truthful_guess(const Instance& instance, const SignalProfile& s) const override;

private:
  struct PricerStage {
    std::vector<Bundle> candidates;
    Bundle offered;
    std::vector<Rational> prices;
  };
  const PricerStage& pricer_stage(const Instance& instance, int r1, std::int64_t b1);

  Budgets budgets_;
  std::map<std::pair<int, std::int64_t>, PricerStage> stage_cache_;
};

/// An algorithm over independent (signal-free) bundle valuations, used as the
/// payload of the black-box transform.
class IndependentAlgorithm {
public:
  virtual ~IndependentAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual Allocation run(int n, int m, const std::vector<BundleValuation>& valuations) const = 0;
};

/// Agents pick in cyclic index order; each takes her best remaining single
/// item, ties to the lowest item index.
class RoundRobin final : public IndependentAlgorithm {
public:
  std::string name() const override { return "round-robin"; }
  Allocation run(int n, int m, const std::vector<BundleValuation>& valuations) const override;
};

/// Lexicographically first allocation (by item-to-agent assignment vector)
/// satisfying the notion for every agent under the supplied valuations.
/// Share notions use the given entitlements, equal by default.
class BruteForceFair final : public IndependentAlgorithm {
public:
  explicit BruteForceFair(FairnessNotion notion, std::vector<Rational> entitlements = {},
                          Budgets budgets = {})
      : notion_(notion), entitlements_(std::move(entitlements)), budgets_(budgets) {}

  std::string name() const override { return "brute-force-" + notion_name(notion_); }
  Allocation run(int n, int m, const std::vector<BundleValuation>& valuations) const override;

private:
  FairnessNotion notion_;
  std::vector<Rational> entitlements_;
  Budgets budgets_;
};

/// Three or more agents. Each bid is a full signal profile; when at least
/// n-1 agents submit the same profile and report consistently with it, the
/// wrapped algorithm runs on the valuations that profile induces, otherwise a
/// predefined allocation is returned. Algorithm outputs are memoized by the
/// consensus profile.
class BlackBox final : public Mechanism {
public:
  BlackBox(std::shared_ptr<const IndependentAlgorithm> algorithm,
           std::optional<Allocation> default_allocation = {}, Budgets budgets = {})
      : algorithm_(std::move(algorithm)),
        default_allocation_(std::move(default_allocation)),
        budgets_(budgets) {}

  std::string name() const override { return "blackbox(" + algorithm_->name() + ")"; }
  void check_instance(const Instance& instance) const override;
  std::uint64_t bid_count(const Instance& instance, int agent) const override;
  MechanismResult run(const Instance& instance, const ReportProfile& reports) override;
  ReportProfile truthful_guess(const Instance& instance, const SignalProfile& s) const override;

private:
  std::shared_ptr<const IndependentAlgorithm> algorithm_;
  std::optional<Allocation> default_allocation_;  // all items to agent 0 when unset
  Budgets budgets_;
  std::map<std::uint64_t, Allocation> output_cache_;
};

/// "cut-and-choose", "price-and-choose", "blackbox-roundrobin", or
/// "blackbox-<notion>" for the brute-force fair payloads.
std::unique_ptr<Mechanism> make_mechanism(const std::string& spec, const Instance& instance,
                                          Budgets budgets = {});

}  // namespace idv
