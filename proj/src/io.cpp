#include "idv/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "idv/errors.hpp"

namespace idv {

namespace {

Rational rational_field(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError(where + ": expected a rational as a \"p/q\" string");
}

const Json& require(const Json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

Expr expr_from_json(const Json& j, const std::string& where) {
  if (j.is_string() || j.is_number()) return Expr::constant(rational_field(j, where));
  if (!j.is_object()) throw InputError(where + ": expected an expression object");
  std::string op = require(j, "op", where).get<std::string>();
  if (op == "const") return Expr::constant(rational_field(require(j, "value", where), where));
  if (op == "sig")
    return Expr::sig(require(j, "agent", where).get<int>(), require(j, "coord", where).get<int>());
  if (op == "scale")
    return Expr::scale(rational_field(require(j, "by", where), where),
                       expr_from_json(require(j, "arg", where), where + ".arg"));
  if (op == "add" || op == "min" || op == "max") {
    std::vector<Expr> args;
    const Json& list = require(j, "args", where);
    if (!list.is_array() || list.empty())
      throw InputError(where + ": '" + op + "' needs a nonempty args array");
    for (std::size_t i = 0; i < list.size(); ++i)
      args.push_back(expr_from_json(list[i], where + ".args[" + std::to_string(i) + "]"));
    if (op == "add") return Expr::add(std::move(args));
    if (op == "min") return Expr::min(std::move(args));
    return Expr::max(std::move(args));
  }
  throw InputError(where + ": unknown expression op '" + op + "'");
}

Json expr_to_json(const Expr& e) {
  Json j;
  switch (e.op) {
    case Expr::Op::Const:
      j["op"] = "const";
      j["value"] = rational_to_string(e.value);
      return j;
    case Expr::Op::Sig:
      j["op"] = "sig";
      j["agent"] = e.agent;
      j["coord"] = e.coord;
      return j;
    case Expr::Op::Scale:
      j["op"] = "scale";
      j["by"] = rational_to_string(e.value);
      j["arg"] = expr_to_json(e.args.front());
      return j;
    case Expr::Op::Add:
    case Expr::Op::Min:
    case Expr::Op::Max: {
      j["op"] = e.op == Expr::Op::Add ? "add" : (e.op == Expr::Op::Min ? "min" : "max");
      Json args = Json::array();
      for (const Expr& arg : e.args) args.push_back(expr_to_json(arg));
      j["args"] = std::move(args);
      return j;
    }
  }
  throw InputError("corrupt expression node");
}

std::vector<Expr> expr_list(const Json& j, int m, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != m)
    throw InputError(where + ": expected one expression per item (" + std::to_string(m) + ")");
  std::vector<Expr> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(expr_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Valuation valuation_from_json(const Json& j, int m, const std::string& where) {
  std::string kind = require(j, "kind", where).get<std::string>();
  if (kind == "additive") return Valuation::additive(expr_list(require(j, "items", where), m, where + ".items"));
  if (kind == "xos") {
    const Json& clauses = require(j, "clauses", where);
    if (!clauses.is_array() || clauses.empty())
      throw InputError(where + ".clauses: expected a nonempty array of clauses");
    std::vector<std::vector<Expr>> parsed;
    for (std::size_t c = 0; c < clauses.size(); ++c)
      parsed.push_back(expr_list(clauses[c], m, where + ".clauses[" + std::to_string(c) + "]"));
    return Valuation::xos(std::move(parsed));
  }
  if (kind == "table") {
    const Json& rows = require(j, "values", where);
    if (!rows.is_array()) throw InputError(where + ".values: expected an array of rows");
    std::vector<std::vector<Rational>> table;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Json& row = rows[r];
      std::string row_where = where + ".values[" + std::to_string(r) + "]";
      if (!row.is_array()) throw InputError(row_where + ": expected an array");
      std::vector<Rational> parsed;
      parsed.reserve(row.size());
      for (std::size_t c = 0; c < row.size(); ++c)
        parsed.push_back(rational_field(row[c], row_where + "[" + std::to_string(c) + "]"));
      table.push_back(std::move(parsed));
    }
    return Valuation::from_table(std::move(table));
  }
  if (kind == "setcover") return Valuation::set_cover(require(j, "k", where).get<int>());
  throw InputError(where + ": unknown valuation kind '" + kind + "'");
}

Json valuation_to_json(const Valuation& v) {
  Json j;
  switch (v.kind) {
    case Valuation::Kind::Additive: {
      j["kind"] = "additive";
      Json items = Json::array();
      for (const Expr& e : v.items) items.push_back(expr_to_json(e));
      j["items"] = std::move(items);
      return j;
    }
    case Valuation::Kind::Xos: {
      j["kind"] = "xos";
      Json clauses = Json::array();
      for (const auto& clause : v.clauses) {
        Json parsed = Json::array();
        for (const Expr& e : clause) parsed.push_back(expr_to_json(e));
        clauses.push_back(std::move(parsed));
      }
      j["clauses"] = std::move(clauses);
      return j;
    }
    case Valuation::Kind::Table: {
      j["kind"] = "table";
      Json rows = Json::array();
      for (const auto& row : v.table) {
        Json parsed = Json::array();
        for (const Rational& value : row) parsed.push_back(rational_to_string(value));
        rows.push_back(std::move(parsed));
      }
      j["values"] = std::move(rows);
      return j;
    }
    case Valuation::Kind::SetCover:
      j["kind"] = "setcover";
      j["k"] = v.setcover_k;
      return j;
  }
  throw InputError("corrupt valuation kind");
}

}  // namespace

Instance instance_from_json(const Json& j) {
  Instance instance;
  instance.n = require(j, "n", "instance").get<int>();
  instance.m = require(j, "m", "instance").get<int>();

  const Json& entitlements = require(j, "entitlements", "instance");
  if (!entitlements.is_array()) throw InputError("instance.entitlements: expected an array");
  for (std::size_t i = 0; i < entitlements.size(); ++i)
    instance.entitlements.push_back(
        rational_field(entitlements[i], "instance.entitlements[" + std::to_string(i) + "]"));

  const Json& spaces = require(j, "signal_spaces", "instance");
  if (!spaces.is_array()) throw InputError("instance.signal_spaces: expected an array");
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    std::string where = "instance.signal_spaces[" + std::to_string(i) + "]";
    std::string kind = require(spaces[i], "kind", where).get<std::string>();
    SignalSpace space;
    if (kind == "singleton") {
      space.kind = SpaceKind::Singleton;
    } else if (kind == "vectors") {
      space.kind = SpaceKind::Vectors;
      const Json& vectors = require(spaces[i], "vectors", where);
      if (!vectors.is_array() || vectors.empty())
        throw InputError(where + ".vectors: expected a nonempty array");
      for (std::size_t s = 0; s < vectors.size(); ++s) {
        const Json& vec = vectors[s];
        std::string vec_where = where + ".vectors[" + std::to_string(s) + "]";
        if (!vec.is_array()) throw InputError(vec_where + ": expected an array");
        std::vector<Rational> coords;
        for (std::size_t c = 0; c < vec.size(); ++c)
          coords.push_back(rational_field(vec[c], vec_where + "[" + std::to_string(c) + "]"));
        space.vectors.push_back(std::move(coords));
      }
    } else {
      throw InputError(where + ": unknown signal space kind '" + kind + "'");
    }
    instance.spaces.push_back(std::move(space));
  }

  const Json& valuations = require(j, "valuations", "instance");
  if (!valuations.is_array()) throw InputError("instance.valuations: expected an array");
  for (std::size_t i = 0; i < valuations.size(); ++i)
    instance.valuations.push_back(valuation_from_json(
        valuations[i], instance.m, "instance.valuations[" + std::to_string(i) + "]"));

  instance.validate();
  return instance;
}

Instance instance_from_string(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("instance: not valid JSON");
  return instance_from_json(j);
}

Instance instance_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return instance_from_string(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Json instance_to_json(const Instance& instance) {
  Json j;
  j["n"] = instance.n;
  j["m"] = instance.m;
  Json entitlements = Json::array();
  for (const Rational& a : instance.entitlements) entitlements.push_back(rational_to_string(a));
  j["entitlements"] = std::move(entitlements);
  Json spaces = Json::array();
  for (const SignalSpace& space : instance.spaces) {
    Json parsed;
    if (space.kind == SpaceKind::Singleton) {
      parsed["kind"] = "singleton";
    } else {
      parsed["kind"] = "vectors";
      Json vectors = Json::array();
      for (const auto& vec : space.vectors) {
        Json coords = Json::array();
        for (const Rational& c : vec) coords.push_back(rational_to_string(c));
        vectors.push_back(std::move(coords));
      }
      parsed["vectors"] = std::move(vectors);
    }
    spaces.push_back(std::move(parsed));
  }
  j["signal_spaces"] = std::move(spaces);
  Json valuations = Json::array();
  for (const Valuation& v : instance.valuations) valuations.push_back(valuation_to_json(v));
  j["valuations"] = std::move(valuations);
  return j;
}

ReportProfile reports_from_json(const Json& j, const Instance& instance,
                                const Mechanism& mechanism) {
  const Json& list = require(j, "reports", "reports");
  if (!list.is_array() || static_cast<int>(list.size()) != instance.n)
    throw InputError("reports: expected one entry per agent");
  ReportProfile reports;
  for (std::size_t i = 0; i < list.size(); ++i) {
    std::string where = "reports[" + std::to_string(i) + "]";
    Report r;
    r.signal = require(list[i], "signal", where).get<int>();
    const Json& bid = require(list[i], "bid", where);
    if (bid.is_array()) {
      // Full-profile guess, given as one signal index per agent.
      SignalProfile guess;
      for (const Json& g : bid) guess.push_back(g.get<int>());
      r.bid = static_cast<std::int64_t>(instance.flatten_profile(guess));
    } else if (bid.is_number_integer()) {
      r.bid = bid.get<std::int64_t>();
    } else {
      throw InputError(where + ".bid: expected a signal index or an index array");
    }
    reports.push_back(r);
  }
  mechanism.check_reports(instance, reports);
  return reports;
}

ReportProfile reports_from_file(const std::string& path, const Instance& instance,
                                const Mechanism& mechanism) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open reports file: " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw InputError(path + ": not valid JSON");
  try {
    return reports_from_json(j, instance, mechanism);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Json reports_to_json(const ReportProfile& reports, const Instance& instance,
                     const Mechanism& mechanism) {
  Json list = Json::array();
  bool profile_bids = mechanism.bid_count(instance, 0) == instance.profile_count() &&
                      instance.n > 2;
  for (const Report& r : reports) {
    Json entry;
    entry["signal"] = r.signal;
    if (profile_bids) {
      Json guess = Json::array();
      for (int s : instance.unflatten_profile(static_cast<std::uint64_t>(r.bid))) guess.push_back(s);
      entry["bid"] = std::move(guess);
    } else {
      entry["bid"] = r.bid;
    }
    list.push_back(std::move(entry));
  }
  Json j;
  j["reports"] = std::move(list);
  return j;
}

Json bundle_to_json(const Bundle& bundle) {
  Json j = Json::array();
  for (int item : bundle.items()) j.push_back(item);
  return j;
}

Json allocation_to_json(const Allocation& allocation) {
  Json j = Json::array();
  for (const Bundle& b : allocation.bundles) j.push_back(bundle_to_json(b));
  return j;
}

Json prices_to_json(const std::vector<Rational>& prices) {
  Json j = Json::array();
  for (const Rational& p : prices) j.push_back(rational_to_string(p));
  return j;
}

Json trace_to_json(const MechanismTrace& trace) {
  Json j;
  if (const auto* cut = std::get_if<CutAndChooseTrace>(&trace)) {
    j["mechanism"] = "cut-and-choose";
    j["candidate_count"] = cut->candidate_count;
    j["cutter_best"] = rational_to_string(cut->cutter_best);
    j["cutter_mms"] = rational_to_string(cut->cutter_mms);
    j["branch"] = cut->took_max_branch ? "max" : "balanced-cut";
    j["offered"] = bundle_to_json(cut->offered);
    j["chooser_pick"] = bundle_to_json(cut->chooser_pick);
  } else if (const auto* price = std::get_if<PriceAndChooseTrace>(&trace)) {
    j["mechanism"] = "price-and-choose";
    Json candidates = Json::array();
    for (const Bundle& b : price->candidates) candidates.push_back(bundle_to_json(b));
    j["candidates"] = std::move(candidates);
    j["offered"] = bundle_to_json(price->offered);
    j["prices"] = prices_to_json(price->prices);
    j["chooser_kept_offer"] = price->chooser_kept_offer;
    j["chooser_pick"] = bundle_to_json(price->chooser_pick);
  } else if (const auto* box = std::get_if<BlackBoxTrace>(&trace)) {
    j["mechanism"] = "blackbox";
    j["consensus"] = box->consensus;
    j["used_default"] = box->used_default;
    if (box->consensus) {
      j["agreeing"] = box->agreeing;
      j["executor"] = box->executor;
      j["consensus_bid"] = box->consensus_bid;
    }
  }
  return j;
}

Json fairness_report_to_json(const FairnessReport& report) {
  Json j;
  for (const auto& [notion, entries] : report.results) {
    Json list = Json::array();
    for (const FairnessEntry& entry : entries) {
      Json e;
      e["holds"] = entry.holds;
      e["value"] = rational_to_string(entry.value);
      if (entry.share) e["share"] = rational_to_string(*entry.share);
      if (entry.witness) {
        Json w;
        w["agent"] = entry.witness->agent;
        w["rival"] = entry.witness->rival;
        if (entry.witness->blocking_item) w["blocking_item"] = *entry.witness->blocking_item;
        e["witness"] = std::move(w);
      }
      list.push_back(std::move(e));
    }
    j[notion_name(notion)] = std::move(list);
  }
  return j;
}

Json pne_certificate_to_json(const PneCertificate& certificate, const Instance& instance,
                             const Mechanism& mechanism) {
  Json j;
  j["is_pne"] = certificate.is_pne;
  j["allocation"] = allocation_to_json(certificate.equilibrium_allocation);
  if (!certificate.is_pne) {
    Json d;
    d["agent"] = certificate.deviating_agent;
    d["signal"] = certificate.deviation.signal;
    bool profile_bids =
        mechanism.bid_count(instance, 0) == instance.profile_count() && instance.n > 2;
    if (profile_bids) {
      Json guess = Json::array();
      for (int s :
           instance.unflatten_profile(static_cast<std::uint64_t>(certificate.deviation.bid)))
        guess.push_back(s);
      d["bid"] = std::move(guess);
    } else {
      d["bid"] = certificate.deviation.bid;
    }
    d["gain"] = rational_to_string(certificate.gap);
    d["allocation"] = allocation_to_json(certificate.deviation_allocation);
    j["deviation"] = std::move(d);
  }
  return j;
}

Json impossibility_audit_to_json(const ImpossibilityAudit& audit) {
  Json j;
  j["reproduced"] = audit.reproduced;
  j["vacuous"] = audit.vacuous;
  j["fair_at_start"] = audit.fair_at_start;
  j["pne_at_start"] = audit.pne_at_start;
  j["pne_at_adversarial"] = audit.pne_at_adversarial;
  j["unfair_at_adversarial"] = audit.unfair_at_adversarial;
  if (!audit.detail.empty()) j["detail"] = audit.detail;
  j["n"] = audit.instance.n;
  j["m"] = audit.instance.m;
  j["allocation"] = allocation_to_json(audit.allocation);
  j["start_signals"] = audit.start_signals;
  j["adversarial_signals"] = audit.adversarial_signals;
  j["fairness_at_start"] = fairness_report_to_json(audit.report_at_start);
  j["fairness_at_adversarial"] = fairness_report_to_json(audit.report_at_adversarial);
  return j;
}

Json subadditive_report_to_json(const SubadditiveApsReport& report) {
  Json j;
  j["all_passed"] = report.all_passed;
  j["k"] = report.k;
  j["bundle_checks"] = report.bundle_checks;
  j["price_checks"] = report.price_checks;
  j["complement_identity"] = report.complement_identity_ok;
  j["witness_construction"] = report.witness_construction_ok;
  j["averaging_identity"] = report.averaging_identity_ok;
  j["separation"] = report.separation_ok;
  j["prop"] = rational_to_string(report.prop);
  j["aps_lower_bound"] = rational_to_string(report.aps_lower);
  if (!report.failure.empty()) j["failure"] = report.failure;
  return j;
}

SignalProfile profile_from_json(const Json& j, const Instance& instance) {
  if (!j.is_array()) throw InputError("signal profile: expected an index array");
  SignalProfile profile;
  for (const Json& s : j) profile.push_back(s.get<int>());
  instance.check_profile(profile);
  return profile;
}

}  // namespace idv
