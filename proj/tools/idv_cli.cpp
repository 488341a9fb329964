// Command line front end: instance I/O, mechanism runs, fairness audits,
// share computation, and one-command reproductions of the library's negative
// results. Structured JSON goes to stdout (deterministic for fixed inputs and
// seeds); human-readable summaries and timings go to stderr. Exit codes:
// 0 = property holds, 1 = property violated / not reproduced, 2 = input or
// resource error.

#include <chrono>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "idv/axioms.hpp"
#include "idv/counterexamples.hpp"
#include "idv/equilibrium.hpp"
#include "idv/io.hpp"

using namespace idv;

namespace {

struct CommonOptions {
  std::string instance_path;
  std::string mechanism = "cut-and-choose";
  Budgets budgets;
};

void add_budget_flags(CLI::App* cmd, Budgets& budgets) {
  cmd->add_option("--budget-subset-bits", budgets.max_subset_bits,
                  "largest m for 2^m bundle scans");
  cmd->add_option("--budget-partitions", budgets.max_partitions,
                  "partition/allocation enumeration cap");
  cmd->add_option("--budget-profiles", budgets.max_profiles,
                  "report/deviation enumeration cap");
  cmd->add_option("--budget-price-items", budgets.max_price_items,
                  "largest m for price-space programs");
  cmd->add_option("--budget-axiom-checks", budgets.max_axiom_checks,
                  "axiom verification cap");
}

SignalProfile parse_signvalues(const std::string& csv, const Instance& instance) {
  SignalProfile profile;
  std::size_t begin = 0;
  while (begin <= csv.size()) {
    std::size_t comma = csv.find(',', begin);
    std::string token = csv.substr(begin, comma == std::string::npos ? comma : comma - begin);
    try {
      profile.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw InputError("invalid signal index '" + token + "'");
    }
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  instance.check_profile(profile);
  return profile;
}

std::set<FairnessNotion> parse_notions(const std::string& csv) {
  std::set<FairnessNotion> notions;
  std::size_t begin = 0;
  while (begin <= csv.size()) {
    std::size_t comma = csv.find(',', begin);
    std::string token = csv.substr(begin, comma == std::string::npos ? comma : comma - begin);
    if (!token.empty()) notions.insert(parse_notion(token));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return notions;
}

void emit(const Json& report) { std::cout << report.dump(2) << "\n"; }

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

int run_shares(const CommonOptions& common, int agent, const std::string& profile_csv,
               const std::string& notions_csv) {
  Instance instance = instance_from_file(common.instance_path);
  SignalProfile profile = profile_csv.empty()
                              ? SignalProfile(static_cast<std::size_t>(instance.n), 0)
                              : parse_signvalues(profile_csv, instance);
  instance.check_profile(profile);
  std::set<FairnessNotion> notions = parse_notions(notions_csv);

  Json report;
  report["command"] = "shares";
  report["agent"] = agent;
  report["profile"] = profile;
  Json shares;
  bool resource_trouble = false;
  for (FairnessNotion notion : notions) {
    if (is_envy_notion(notion)) continue;
    try {
      switch (notion) {
        case FairnessNotion::PROP:
          shares["prop"] = rational_to_string(prop_share(instance, agent, profile));
          break;
        case FairnessNotion::MMS:
          shares["mms"] =
              rational_to_string(mms_share(instance, agent, profile, common.budgets));
          break;
        case FairnessNotion::APS:
          shares["aps"] = rational_to_string(
              aps_share(instance, agent, profile,
                        instance.entitlements[static_cast<std::size_t>(agent)], common.budgets));
          break;
        default:
          break;
      }
    } catch (const ResourceError& e) {
      shares[notion_name(notion)] = Json{{"error", e.what()}};
      resource_trouble = true;
    }
  }
  report["shares"] = std::move(shares);
  emit(report);
  std::cerr << "shares for agent " << agent << " computed\n";
  return resource_trouble ? 2 : 0;
}

int run_mechanism_cmd(const CommonOptions& common, const std::string& reports_path,
                      const std::string& truth_csv, const std::string& notions_csv) {
  Instance instance = instance_from_file(common.instance_path);
  auto mechanism = make_mechanism(common.mechanism, instance, common.budgets);
  mechanism->check_instance(instance);
  ReportProfile reports = reports_from_file(reports_path, instance, *mechanism);

  Stopwatch clock;
  MechanismResult result = mechanism->run(instance, reports);

  Json report;
  report["command"] = "run";
  report["mechanism"] = mechanism->name();
  report["allocation"] = allocation_to_json(result.allocation);
  report["trace"] = trace_to_json(result.trace);
  if (!truth_csv.empty()) {
    SignalProfile truth = parse_signvalues(truth_csv, instance);
    std::set<FairnessNotion> notions = parse_notions(notions_csv);
    if (!notions.empty()) {
      std::vector<SignalProfile> profiles(static_cast<std::size_t>(instance.n), truth);
      report["audit"] = fairness_report_to_json(
          audit(instance, result.allocation, profiles, notions, common.budgets));
    }
  }
  emit(report);
  std::cerr << common.mechanism << " allocated " << instance.m << " goods in " << clock.ms()
            << " ms\n";
  return 0;
}

int run_pne(const CommonOptions& common, bool enumerate, const std::string& reports_path,
            const std::string& truth_csv, const std::string& notions_csv) {
  Instance instance = instance_from_file(common.instance_path);
  auto mechanism = make_mechanism(common.mechanism, instance, common.budgets);
  mechanism->check_instance(instance);
  SignalProfile truth = truth_csv.empty()
                            ? SignalProfile(static_cast<std::size_t>(instance.n), 0)
                            : parse_signvalues(truth_csv, instance);

  Stopwatch clock;
  Json report;
  report["command"] = enumerate ? "pne-enumerate" : "pne-verify";
  report["mechanism"] = mechanism->name();
  report["true_signals"] = truth;

  int exit_code = 0;
  if (enumerate) {
    auto equilibria = enumerate_pne(*mechanism, instance, truth, common.budgets);
    std::set<FairnessNotion> notions = parse_notions(notions_csv);
    Json list = Json::array();
    std::vector<SignalProfile> profiles(static_cast<std::size_t>(instance.n), truth);
    for (const auto& [reports, allocation] : equilibria) {
      Json entry;
      entry["reports"] = reports_to_json(reports, instance, *mechanism);
      entry["allocation"] = allocation_to_json(allocation);
      if (!notions.empty())
        entry["audit"] = fairness_report_to_json(
            audit(instance, allocation, profiles, notions, common.budgets));
      list.push_back(std::move(entry));
    }
    report["pne_count"] = equilibria.size();
    report["equilibria"] = std::move(list);
  } else {
    ReportProfile reports = reports_path.empty()
                                ? mechanism->truthful_guess(instance, truth)
                                : reports_from_file(reports_path, instance, *mechanism);
    PneCertificate cert = verify_pne(*mechanism, instance, truth, reports, common.budgets);
    report["reports"] = reports_to_json(reports, instance, *mechanism);
    report["certificate"] = pne_certificate_to_json(cert, instance, *mechanism);
    exit_code = cert.is_pne ? 0 : 1;
  }
  emit(report);
  std::cerr << report["command"].get<std::string>() << " finished in " << clock.ms() << " ms\n";
  return exit_code;
}

int run_repro(const std::string& target, int n, int k, std::uint64_t bundles,
              std::uint64_t prices, std::uint64_t seed, const std::string& mechanism_spec,
              Budgets budgets) {
  Stopwatch clock;
  Json report;
  report["command"] = "repro";
  report["target"] = target;
  int exit_code = 0;

  if (target == "mms-impossibility" || target == "ef1-impossibility") {
    ImpossibilityVariant variant =
        target == "mms-impossibility" ? ImpossibilityVariant::MMS : ImpossibilityVariant::EF1;
    Instance instance = impossibility_instance(n, variant);
    auto mechanism = make_mechanism(mechanism_spec, instance, budgets);
    ImpossibilityAudit result = impossibility_audit(*mechanism, n, variant, budgets);
    report["mechanism"] = mechanism->name();
    report["audit"] = impossibility_audit_to_json(result);
    exit_code = result.reproduced ? 0 : 1;
  } else if (target == "xos-gap") {
    XosGapReport result = xos_mms_gap_check();
    Json j;
    j["verified"] = result.verified;
    j["mms"] = Json::array(
        {rational_to_string(result.mms_agent0), rational_to_string(result.mms_agent1)});
    if (result.double_mms_allocation)
      j["double_mms_allocation"] = allocation_to_json(*result.double_mms_allocation);
    report["check"] = std::move(j);
    exit_code = result.verified ? 0 : 1;
  } else if (target == "subadditive-aps") {
    SubadditiveApsReport result = subadditive_incompatibility_check(k, bundles, prices, seed);
    report["check"] = subadditive_report_to_json(result);
    exit_code = result.all_passed ? 0 : 1;
  } else {
    throw InputError("unknown repro target: '" + target + "'");
  }
  emit(report);
  std::cerr << "repro " << target << " finished in " << clock.ms() << " ms\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact fair-division mechanisms for interdependent valuations"};
  app.require_subcommand(1);

  CommonOptions common;
  int agent = 0;
  std::string profile_csv;
  std::string truth_csv;
  std::string notions_csv = "prop,mms,aps";
  std::string reports_path;
  std::string repro_target;
  int repro_n = 3;
  int repro_k = 6;
  std::uint64_t repro_bundles = 10'000;
  std::uint64_t repro_prices = 1'000;
  std::uint64_t seed = 0;
  std::string repro_mechanism;

  CLI::App* shares = app.add_subcommand("shares", "compute PROP/MMS/APS as exact rationals");
  shares->add_option("--instance", common.instance_path)->required();
  shares->add_option("--agent", agent);
  shares->add_option("--profile", profile_csv, "evaluation signals, comma separated indices");
  shares->add_option("--notions", notions_csv);
  add_budget_flags(shares, common.budgets);

  CLI::App* run = app.add_subcommand("run", "run a mechanism on a report profile");
  run->add_option("--instance", common.instance_path)->required();
  run->add_option("--mechanism", common.mechanism);
  run->add_option("--reports", reports_path)->required();
  run->add_option("--true-signals", truth_csv, "audit the outcome at these signals");
  run->add_option("--notions", notions_csv);
  add_budget_flags(run, common.budgets);

  CLI::App* pne = app.add_subcommand("pne", "pure Nash equilibrium tools");
  pne->require_subcommand(1);
  CLI::App* pne_verify = pne->add_subcommand("verify", "check one report profile");
  pne_verify->add_option("--instance", common.instance_path)->required();
  pne_verify->add_option("--mechanism", common.mechanism);
  pne_verify->add_option("--reports", reports_path,
                         "defaults to the truthful-guess profile when omitted");
  pne_verify->add_option("--true-signals", truth_csv);
  add_budget_flags(pne_verify, common.budgets);
  CLI::App* pne_enumerate = pne->add_subcommand("enumerate", "list all equilibria");
  pne_enumerate->add_option("--instance", common.instance_path)->required();
  pne_enumerate->add_option("--mechanism", common.mechanism);
  pne_enumerate->add_option("--true-signals", truth_csv);
  pne_enumerate->add_option("--notions", notions_csv)->capture_default_str();
  add_budget_flags(pne_enumerate, common.budgets);

  CLI::App* repro = app.add_subcommand(
      "repro", "reproduce a library result: mms-impossibility, ef1-impossibility, xos-gap, "
               "subadditive-aps");
  repro->add_option("target", repro_target)->required();
  repro->add_option("--n", repro_n);
  repro->add_option("--k", repro_k);
  repro->add_option("--bundles", repro_bundles);
  repro->add_option("--prices", repro_prices);
  repro->add_option("--seed", seed);
  repro->add_option("--mechanism", repro_mechanism);
  Budgets repro_budgets;
  add_budget_flags(repro, repro_budgets);

  CLI11_PARSE(app, argc, argv);

  try {
    if (shares->parsed()) return run_shares(common, agent, profile_csv, notions_csv);
    if (run->parsed()) return run_mechanism_cmd(common, reports_path, truth_csv, notions_csv);
    if (pne->parsed())
      return run_pne(common, pne_enumerate->parsed(), reports_path, truth_csv, notions_csv);
    if (repro->parsed()) {
      if (repro_mechanism.empty())
        repro_mechanism = repro_target == "ef1-impossibility" ? "blackbox-roundrobin"
                                                              : "blackbox-mms";
      return run_repro(repro_target, repro_n, repro_k, repro_bundles, repro_prices, seed,
                       repro_mechanism, repro_budgets);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
