#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "idv/counterexamples.hpp"
#include "idv/equilibrium.hpp"
#include "support/generators.hpp"

using namespace idv;

namespace {
Rational R(const char* s) { return parse_rational(s); }
using testgen::const_additive;
}

TEST_CASE("truthful guessing is an equilibrium of both two-agent mechanisms") {
  testgen::Rng rng(515);
  for (int round = 0; round < 12; ++round) {
    testgen::InstanceOptions options;
    options.m = 1 + static_cast<int>(testgen::pick(rng, 3));
    options.max_signals = 3;
    options.entitlements =
        round % 2 == 0 ? std::vector<Rational>{} : std::vector<Rational>{R("1/4"), R("3/4")};
    Instance instance = testgen::random_instance(rng, options);
    SignalProfile s = testgen::random_profile(rng, instance);

    if (round % 2 == 0) {
      CutAndChoose mechanism;
      CHECK(verify_pne(mechanism, instance, s, mechanism.truthful_guess(instance, s)).is_pne);
    } else {
      PriceAndChoose mechanism;
      CHECK(verify_pne(mechanism, instance, s, mechanism.truthful_guess(instance, s)).is_pne);
    }
  }
}

TEST_CASE("singleton spaces admit no deviation at all") {
  Instance instance = const_additive({{1, 2}, {2, 1}});
  CutAndChoose mechanism;
  ReportProfile only{Report{0, 0}, Report{0, 0}};
  CHECK(verify_pne(mechanism, instance, {0, 0}, only).is_pne);

  auto equilibria = enumerate_pne(mechanism, instance, {0, 0});
  REQUIRE(equilibria.size() == 1);
  CHECK(equilibria[0].first == only);
}

TEST_CASE("a miscalibrated chooser guess opens a cutter deviation") {
  // Truth is all-ones but the chooser guesses the half-ones signal. The
  // chooser then grabs whichever side looks valuable under that guess, so the
  // cutter profits by reporting half-ones and keeping the three real goods.
  Instance instance = testgen::unit_values_instance();
  CutAndChoose mechanism;
  SignalProfile truth{0, 0};
  ReportProfile reports{Report{0, 0}, Report{0, 1}};
  PneCertificate cert = verify_pne(mechanism, instance, truth, reports);
  REQUIRE_FALSE(cert.is_pne);
  CHECK(cert.deviating_agent == 0);
  CHECK(cert.gap == 1);  // three goods instead of two

  // The certificate replays: rerunning on the deviation reproduces the gain.
  ReportProfile deviated = reports;
  deviated[static_cast<std::size_t>(cert.deviating_agent)] = cert.deviation;
  MechanismResult replay = mechanism.run(instance, deviated);
  CHECK(replay.allocation == cert.deviation_allocation);
  SignalProfile perceived = perceived_profile(
      instance, cert.deviating_agent, truth[static_cast<std::size_t>(cert.deviating_agent)],
      reports);
  Rational before = eval_value(instance, cert.deviating_agent, perceived,
                               cert.equilibrium_allocation[cert.deviating_agent]);
  Rational after = eval_value(instance, cert.deviating_agent, perceived,
                              replay.allocation[cert.deviating_agent]);
  CHECK(after - before == cert.gap);
}

TEST_CASE("enumeration agrees with per-profile verification") {
  testgen::Rng rng(626);
  for (int round = 0; round < 6; ++round) {
    testgen::InstanceOptions options;
    options.m = 2;
    options.max_signals = 2;
    Instance instance = testgen::random_instance(rng, options);
    SignalProfile s = testgen::random_profile(rng, instance);
    CutAndChoose mechanism;

    auto equilibria = enumerate_pne(mechanism, instance, s);
    std::set<ReportProfile> found;
    for (const auto& [reports, allocation] : equilibria) found.insert(reports);

    // The truthful guess is always among them.
    CHECK(found.count(mechanism.truthful_guess(instance, s)) == 1);

    // Exhaustive cross-check of every profile in the product space.
    ReportProfile reports(2);
    for (std::uint64_t s0 = 0; s0 < instance.space_size(0); ++s0)
      for (std::uint64_t b0 = 0; b0 < mechanism.bid_count(instance, 0); ++b0)
        for (std::uint64_t s1 = 0; s1 < instance.space_size(1); ++s1)
          for (std::uint64_t b1 = 0; b1 < mechanism.bid_count(instance, 1); ++b1) {
            reports[0] = Report{static_cast<int>(s0), static_cast<std::int64_t>(b0)};
            reports[1] = Report{static_cast<int>(s1), static_cast<std::int64_t>(b1)};
            CHECK(verify_pne(mechanism, instance, s, reports).is_pne ==
                  (found.count(reports) == 1));
          }
  }
}

TEST_CASE("budgets cut off oversized searches with resource errors") {
  Instance instance = impossibility_instance(3, ImpossibilityVariant::MMS);
  BlackBox mechanism(std::make_shared<BruteForceFair>(FairnessNotion::MMS));
  SignalProfile s{0, 0, 0};
  Budgets tiny;
  tiny.max_profiles = 10;
  CHECK_THROWS_AS(
      verify_pne(mechanism, instance, s, mechanism.truthful_guess(instance, s), tiny),
      ResourceError);
  CHECK_THROWS_AS(enumerate_pne(mechanism, instance, s, tiny), ResourceError);
}

TEST_CASE("equilibrium audit separates existential and universal fairness") {
  Instance instance = testgen::unit_values_instance();
  CutAndChoose mechanism;
  SignalProfile s{0, 0};
  EquilibriumAudit result = audit_equilibria(
      mechanism, instance, s, {FairnessNotion::MMS, FairnessNotion::EF1}, Budgets{});
  CHECK(result.pne_count > 0);
  CHECK(result.exists_fair_pne);
  REQUIRE(result.fair_witness.has_value());
  FairnessReport check = audit(instance, result.fair_witness->second, {s, s},
                               {FairnessNotion::MMS, FairnessNotion::EF1});
  CHECK(check.all());
}

TEST_CASE("zero valuations make every equilibrium fair") {
  Instance instance = const_additive({{0, 0}, {0, 0}});
  CutAndChoose mechanism;
  EquilibriumAudit result = audit_equilibria(
      mechanism, instance, {0, 0},
      {FairnessNotion::EF, FairnessNotion::MMS, FairnessNotion::PROP, FairnessNotion::APS},
      Budgets{});
  CHECK(result.pne_count == 1);  // singleton spaces
  CHECK(result.exists_fair_pne);
  CHECK(result.all_pne_fair);
}
