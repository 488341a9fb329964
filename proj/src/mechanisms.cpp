#include "idv/mechanisms.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

#include "idv/errors.hpp"
#include "idv/lp.hpp"

namespace idv {

void Mechanism::check_reports(const Instance& instance, const ReportProfile& reports) const {
  if (static_cast<int>(reports.size()) != instance.n)
    throw InputError("report profile length does not match n");
  for (int i = 0; i < instance.n; ++i) {
    const Report& r = reports[static_cast<std::size_t>(i)];
    if (r.signal < 0 || static_cast<std::size_t>(r.signal) >= instance.space_size(i))
      throw InputError("reported signal out of range for agent " + std::to_string(i));
    if (r.bid < 0 || static_cast<std::uint64_t>(r.bid) >= bid_count(instance, i))
      throw InputError("bid out of range for agent " + std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// Cut-&-Choose

void CutAndChoose::check_instance(const Instance& instance) const {
  instance.validate();
  if (instance.n != 2) throw DomainError("cut-and-choose requires exactly two agents");
  if (!instance.equal_entitlements())
    throw DomainError("cut-and-choose requires equal entitlements");
}

std::uint64_t CutAndChoose::bid_count(const Instance& instance, int agent) const {
  // Each agent guesses the other's signal.
  return instance.space_size(1 - agent);
}

ReportProfile CutAndChoose::truthful_guess(const Instance& instance, const SignalProfile& s) const {
  instance.check_profile(s);
  return {Report{s[0], s[1]}, Report{s[1], s[0]}};
}

const CutAndChoose::CutterStage& CutAndChoose::cutter_stage(const Instance& instance, int r1,
                                                            std::int64_t b1) {
  auto key = std::make_pair(r1, b1);
  if (auto it = stage_cache_.find(key); it != stage_cache_.end()) return it->second;

  SignalProfile profile{r1, static_cast<int>(b1)};
  std::vector<Rational> v1 = value_table(instance, 0, profile, budgets_);
  std::vector<Rational> v2 = value_table(instance, 1, profile, budgets_);
  std::uint64_t all = Bundle::full(instance.m).bits;

  CutterStage stage;
  // T(r1,b1): the sides the chooser would weakly prefer under the cutter's
  // report; the cutter's best achievable leftover over that family.
  std::uint64_t best_mask = 0;
  bool have_best = false;
  for (std::uint64_t mask = 0; mask <= all; ++mask) {
    if (v2[mask] < v2[all & ~mask]) {
      if (mask == all) break;
      continue;
    }
    ++stage.candidate_count;
    const Rational& leftover = v1[all & ~mask];
    if (!have_best || leftover > stage.best) {
      stage.best = leftover;
      best_mask = mask;
      have_best = true;
    }
    if (mask == all) break;
  }
  stage.mms = two_part_mms(v1, instance.m);
  stage.took_max_branch = stage.best > stage.mms;
  // Strictly profitable split: offer the best candidate. Otherwise fall back
  // to the balanced cut, whose both sides are worth at least the maximin
  // value to the cutter.
  stage.offered = stage.took_max_branch ? Bundle(best_mask) : mms_balanced_cut(v1, instance.m);

  return stage_cache_.emplace(key, std::move(stage)).first->second;
}

MechanismResult CutAndChoose::run(const Instance& instance, const ReportProfile& reports) {
  check_instance(instance);
  check_reports(instance, reports);

  const CutterStage& stage = cutter_stage(instance, reports[0].signal, reports[0].bid);
  Bundle offered = stage.offered;
  Bundle rest = complement(offered, instance.m);

  // The chooser evaluates with her guess of the cutter's signal and her own
  // reported signal; ties go to the offered side.
  SignalProfile chooser_profile{static_cast<int>(reports[1].bid), reports[1].signal};
  Bundle pick = eval_value(instance, 1, chooser_profile, offered) >=
                        eval_value(instance, 1, chooser_profile, rest)
                    ? offered
                    : rest;

  MechanismResult result;
  result.allocation = Allocation({complement(pick, instance.m), pick});
  result.trace = CutAndChooseTrace{stage.candidate_count, stage.best,     stage.mms,
                                   stage.took_max_branch, stage.offered, pick};
  return result;
}

// ---------------------------------------------------------------------------
// Price-&-Choose

void PriceAndChoose::check_instance(const Instance& instance) const {
  instance.validate();
  if (instance.n != 2) throw DomainError("price-and-choose requires exactly two agents");
}

std::uint64_t PriceAndChoose::bid_count(const Instance& instance, int agent) const {
  return instance.space_size(1 - agent);
}

ReportProfile PriceAndChoose::truthful_guess(const Instance& instance,
                                             const SignalProfile& s) const {
  instance.check_profile(s);
  return {Report{s[0], s[1]}, Report{s[1], s[0]}};
}

const PriceAndChoose::PricerStage& PriceAndChoose::pricer_stage(const Instance& instance, int r1,
                                                                std::int64_t b1) {
  auto key = std::make_pair(r1, b1);
  if (auto it = stage_cache_.find(key); it != stage_cache_.end()) return it->second;
  if (instance.m > budgets_.max_price_items)
    throw ResourceError("price-space search over m=" + std::to_string(instance.m) +
                        " items exceeds the budget of " + std::to_string(budgets_.max_price_items));

  SignalProfile profile{r1, static_cast<int>(b1)};
  Budgets relaxed = budgets_;
  relaxed.max_subset_bits = std::max(budgets_.max_subset_bits, budgets_.max_price_items);
  std::vector<Rational> v1 = value_table(instance, 0, profile, relaxed);
  std::vector<Rational> v2 = value_table(instance, 1, profile, relaxed);
  const Rational& alpha2 = instance.entitlements[1];
  std::uint64_t all = Bundle::full(instance.m).bits;

  // A set belongs to the candidate family iff some price vector keeps it
  // affordable while every strictly better set costs strictly more than the
  // chooser's entitlement. Scanning masks by descending chooser value lets
  // one antichain of minimal better-sets serve every mask of equal value.
  std::vector<std::uint64_t> order(v2.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint64_t a, std::uint64_t b) { return v2[a] > v2[b]; });

  PricerStage stage;
  std::vector<std::vector<Rational>> witnesses;
  MinimalFamily better;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t group_begin = i;
    const Rational& level = v2[order[group_begin]];
    while (i < order.size() && v2[order[i]] == level) ++i;
    for (std::size_t g = group_begin; g < i; ++g) {
      Bundle candidate(order[g]);
      MarginResult margin =
          strict_unaffordability_margin(instance.m, better.sets(), alpha2, candidate);
      if (margin.feasible && margin.margin > 0) {
        stage.candidates.push_back(candidate);
        witnesses.push_back(std::move(margin.prices));
      }
    }
    for (std::size_t g = group_begin; g < i; ++g) better.insert(Bundle(order[g]));
  }
  if (stage.candidates.empty())
    throw DomainError("internal mechanism error: empty candidate family");

  // Lexicographically smallest maximizer of the pricer's leftover value.
  std::size_t best = 0;
  for (std::size_t c = 1; c < stage.candidates.size(); ++c) {
    const Rational& challenger = v1[all & ~stage.candidates[c].bits];
    const Rational& incumbent = v1[all & ~stage.candidates[best].bits];
    if (challenger > incumbent ||
        (challenger == incumbent && stage.candidates[c] < stage.candidates[best]))
      best = c;
  }
  stage.offered = stage.candidates[best];
  stage.prices = std::move(witnesses[best]);
  std::sort(stage.candidates.begin(), stage.candidates.end());

  return stage_cache_.emplace(key, std::move(stage)).first->second;
}

MechanismResult PriceAndChoose::run(const Instance& instance, const ReportProfile& reports) {
  check_instance(instance);
  check_reports(instance, reports);

  if (instance.m == 0) {
    MechanismResult result;
    result.allocation = Allocation::empty(2);
    result.trace = PriceAndChooseTrace{{Bundle(0)}, Bundle(0), {}, true, Bundle(0)};
    return result;
  }

  const PricerStage& stage = pricer_stage(instance, reports[0].signal, reports[0].bid);
  const Rational& alpha2 = instance.entitlements[1];
  std::uint64_t all = Bundle::full(instance.m).bits;

  // Affordable sets under the posted prices.
  std::vector<Rational> price_of(std::size_t{1} << instance.m);
  price_of[0] = 0;
  for (std::uint64_t mask = 1; mask <= all; ++mask)
    price_of[mask] =
        price_of[mask & (mask - 1)] + stage.prices[static_cast<std::size_t>(std::countr_zero(mask))];

  SignalProfile chooser_profile{static_cast<int>(reports[1].bid), reports[1].signal};
  std::vector<Rational> w2 = value_table(instance, 1, chooser_profile,
                                         [&] {
                                           Budgets relaxed = budgets_;
                                           relaxed.max_subset_bits = std::max(
                                               budgets_.max_subset_bits, budgets_.max_price_items);
                                           return relaxed;
                                         }());

  std::uint64_t best_affordable = 0;
  for (std::uint64_t mask = 0; mask <= all; ++mask) {
    if (price_of[mask] > alpha2) continue;
    if (w2[mask] > w2[best_affordable]) best_affordable = mask;
  }

  Bundle pick = w2[stage.offered.bits] == w2[best_affordable] && price_of[stage.offered.bits] <= alpha2
                    ? stage.offered
                    : Bundle(best_affordable);

  MechanismResult result;
  result.allocation = Allocation({complement(pick, instance.m), pick});
  result.trace = PriceAndChooseTrace{stage.candidates, stage.offered, stage.prices,
                                     pick == stage.offered, pick};
  return result;
}

// ---------------------------------------------------------------------------
// Independent algorithms

Allocation RoundRobin::run(int n, int m, const std::vector<BundleValuation>& valuations) const {
  Allocation allocation = Allocation::empty(n);
  Bundle remaining = Bundle::full(m);
  int turn = 0;
  while (!remaining.empty()) {
    const BundleValuation& value = valuations[static_cast<std::size_t>(turn % n)];
    int pick = -1;
    Rational pick_value;
    for (int item : remaining.items()) {
      Rational v = value(Bundle(0).with(item));
      if (pick < 0 || v > pick_value) {
        pick = item;
        pick_value = v;
      }
    }
    allocation[turn % n] = allocation[turn % n].with(pick);
    remaining = remaining.without(pick);
    ++turn;
  }
  return allocation;
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

}  // namespace

Allocation BruteForceFair::run(int n, int m, const std::vector<BundleValuation>& valuations) const {
  std::vector<Rational> entitlements = entitlements_;
  if (entitlements.empty())
    entitlements.assign(static_cast<std::size_t>(n), Rational(1, static_cast<unsigned>(n)));
  if (static_cast<int>(entitlements.size()) != n)
    throw InputError("entitlement count does not match n");
  if (saturating_pow(static_cast<std::uint64_t>(n), m) > budgets_.max_partitions)
    throw ResourceError("allocation scan " + std::to_string(n) + "^" + std::to_string(m) +
                        " exceeds the budget of " + std::to_string(budgets_.max_partitions));

  const std::size_t size = std::size_t{1} << m;
  std::vector<std::vector<Rational>> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)].resize(size);
    for (std::uint64_t mask = 0; mask < size; ++mask)
      values[static_cast<std::size_t>(i)][mask] = valuations[static_cast<std::size_t>(i)](Bundle(mask));
  }

  std::vector<Rational> shares(static_cast<std::size_t>(n));
  if (notion_ == FairnessNotion::PROP) {
    for (int i = 0; i < n; ++i)
      shares[static_cast<std::size_t>(i)] =
          entitlements[static_cast<std::size_t>(i)] * values[static_cast<std::size_t>(i)][size - 1];
  } else if (notion_ == FairnessNotion::MMS) {
    for (int i = 0; i < n; ++i)
      shares[static_cast<std::size_t>(i)] =
          mms_from_values(values[static_cast<std::size_t>(i)], n, m, budgets_);
  } else if (notion_ == FairnessNotion::APS) {
    for (int i = 0; i < n; ++i)
      shares[static_cast<std::size_t>(i)] =
          aps_from_values(values[static_cast<std::size_t>(i)], m,
                          entitlements[static_cast<std::size_t>(i)], budgets_)
              .value;
  }

  auto satisfies = [&](const std::vector<std::uint64_t>& bundles) {
    for (int i = 0; i < n; ++i) {
      const std::vector<Rational>& mine = values[static_cast<std::size_t>(i)];
      const Rational& own = mine[bundles[static_cast<std::size_t>(i)]];
      if (is_envy_notion(notion_)) {
        for (int rival = 0; rival < n; ++rival) {
          if (rival == i) continue;
          std::uint64_t theirs = bundles[static_cast<std::size_t>(rival)];
          if (notion_ == FairnessNotion::EF) {
            if (own < mine[theirs]) return false;
          } else if (notion_ == FairnessNotion::EF1) {
            if (theirs == 0) continue;
            bool ok = false;
            for (std::uint64_t bits = theirs; bits != 0; bits &= bits - 1)
              if (own >= mine[theirs & ~(std::uint64_t{1} << std::countr_zero(bits))]) {
                ok = true;
                break;
              }
            if (!ok) return false;
          } else {  // EFX
            for (std::uint64_t bits = theirs; bits != 0; bits &= bits - 1)
              if (own < mine[theirs & ~(std::uint64_t{1} << std::countr_zero(bits))]) return false;
          }
        }
      } else if (own < shares[static_cast<std::size_t>(i)]) {
        return false;
      }
    }
    return true;
  };

  // Lexicographic scan over item-to-agent assignment vectors.
  std::vector<int> assignment(static_cast<std::size_t>(m), 0);
  std::vector<std::uint64_t> bundles(static_cast<std::size_t>(n), 0);
  for (;;) {
    std::fill(bundles.begin(), bundles.end(), 0);
    for (int item = 0; item < m; ++item)
      bundles[static_cast<std::size_t>(assignment[static_cast<std::size_t>(item)])] |=
          std::uint64_t{1} << item;
    if (satisfies(bundles)) {
      Allocation allocation = Allocation::empty(n);
      for (int i = 0; i < n; ++i) allocation[i] = Bundle(bundles[static_cast<std::size_t>(i)]);
      return allocation;
    }
    int pos = m - 1;
    while (pos >= 0 && assignment[static_cast<std::size_t>(pos)] == n - 1) {
      assignment[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++assignment[static_cast<std::size_t>(pos)];
  }
  throw DomainError("no allocation satisfies " + notion_name(notion_) +
                    " under the supplied valuations");
}

// ---------------------------------------------------------------------------
// Black-box transform

void BlackBox::check_instance(const Instance& instance) const {
  instance.validate();
  if (instance.n < 3) throw DomainError("the black-box transform requires at least three agents");
}

std::uint64_t BlackBox::bid_count(const Instance& instance, int agent) const {
  (void)agent;
  return instance.profile_count();  // each bid is a full signal profile
}

ReportProfile BlackBox::truthful_guess(const Instance& instance, const SignalProfile& s) const {
  instance.check_profile(s);
  std::int64_t flat = static_cast<std::int64_t>(instance.flatten_profile(s));
  ReportProfile reports;
  reports.reserve(static_cast<std::size_t>(instance.n));
  for (int i = 0; i < instance.n; ++i) reports.push_back(Report{s[static_cast<std::size_t>(i)], flat});
  return reports;
}

MechanismResult BlackBox::run(const Instance& instance, const ReportProfile& reports) {
  check_instance(instance);
  check_reports(instance, reports);

  // Largest agreeing set: everyone first, then each single exclusion, in
  // index order. With n >= 3 any two qualifying sets share an agent, so the
  // consensus bid (and hence the output) does not depend on the choice.
  auto qualifies = [&](int excluded, std::vector<int>& members) {
    members.clear();
    std::int64_t common = -1;
    for (int i = 0; i < instance.n; ++i) {
      if (i == excluded) continue;
      const Report& r = reports[static_cast<std::size_t>(i)];
      if (common == -1) common = r.bid;
      if (r.bid != common) return false;
      members.push_back(i);
    }
    SignalProfile guessed = instance.unflatten_profile(static_cast<std::uint64_t>(common));
    for (int i : members)
      if (reports[static_cast<std::size_t>(i)].signal != guessed[static_cast<std::size_t>(i)])
        return false;
    return true;
  };

  std::vector<int> members;
  bool consensus = qualifies(-1, members);
  for (int excluded = 0; !consensus && excluded < instance.n; ++excluded)
    consensus = qualifies(excluded, members);

  MechanismResult result;
  BlackBoxTrace trace;
  trace.consensus = consensus;
  if (!consensus) {
    trace.used_default = true;
    if (default_allocation_) {
      result.allocation = *default_allocation_;
      result.allocation.validate(instance.n, instance.m);
    } else {
      result.allocation = Allocation::empty(instance.n);
      result.allocation[0] = Bundle::full(instance.m);
    }
    result.trace = std::move(trace);
    return result;
  }

  trace.agreeing = members;
  trace.executor = members.front();
  std::uint64_t consensus_flat =
      static_cast<std::uint64_t>(reports[static_cast<std::size_t>(members.front())].bid);
  SignalProfile consensus_profile = instance.unflatten_profile(consensus_flat);
  trace.consensus_bid = consensus_profile;

  auto cached = output_cache_.find(consensus_flat);
  if (cached == output_cache_.end()) {
    std::vector<BundleValuation> valuations;
    valuations.reserve(static_cast<std::size_t>(instance.n));
    for (int i = 0; i < instance.n; ++i)
      valuations.push_back([&instance, i, consensus_profile](Bundle b) {
        return eval_value(instance, i, consensus_profile, b);
      });
    Allocation allocation = algorithm_->run(instance.n, instance.m, valuations);
    allocation.validate(instance.n, instance.m);
    cached = output_cache_.emplace(consensus_flat, std::move(allocation)).first;
  }
  result.allocation = cached->second;
  result.trace = std::move(trace);
  return result;
}

std::unique_ptr<Mechanism> make_mechanism(const std::string& spec, const Instance& instance,
                                          Budgets budgets) {
  if (spec == "cut-and-choose") return std::make_unique<CutAndChoose>(budgets);
  if (spec == "price-and-choose") return std::make_unique<PriceAndChoose>(budgets);
  if (spec.rfind("blackbox-", 0) == 0) {
    std::string payload = spec.substr(9);
    std::shared_ptr<const IndependentAlgorithm> algorithm;
    if (payload == "roundrobin") {
      algorithm = std::make_shared<RoundRobin>();
    } else {
      algorithm = std::make_shared<BruteForceFair>(parse_notion(payload), instance.entitlements,
                                                   budgets);
    }
    return std::make_unique<BlackBox>(std::move(algorithm), std::nullopt, budgets);
  }
  throw InputError("unknown mechanism: '" + spec + "'");
}

}  // namespace idv
