#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "idv/counterexamples.hpp"
#include "idv/equilibrium.hpp"
#include "idv/fairness.hpp"
#include "idv/instance.hpp"
#include "idv/mechanisms.hpp"

namespace idv {

using Json = nlohmann::ordered_json;

/// Instance schema: {"n", "m", "entitlements": ["p/q", ...],
/// "signal_spaces": [{"kind": "singleton"} | {"kind": "vectors", "vectors":
/// [["p/q", ...], ...]}], "valuations": [{"kind": ...}, ...]}. Rationals are
/// "p/q" strings end to end; bundles serialize as sorted item-index lists.
Instance instance_from_json(const Json& j);
Instance instance_from_string(const std::string& text);
Instance instance_from_file(const std::string& path);
Json instance_to_json(const Instance& instance);

/// Reports schema: {"reports": [{"signal": i, "bid": b}, ...]} where b is a
/// signal index for the two-agent mechanisms and a full per-agent index array
/// for the black-box transform.
ReportProfile reports_from_json(const Json& j, const Instance& instance, const Mechanism& mechanism);
ReportProfile reports_from_file(const std::string& path, const Instance& instance,
                                const Mechanism& mechanism);
Json reports_to_json(const ReportProfile& reports, const Instance& instance,
                     const Mechanism& mechanism);

Json bundle_to_json(const Bundle& bundle);
Json allocation_to_json(const Allocation& allocation);
Json prices_to_json(const std::vector<Rational>& prices);
Json trace_to_json(const MechanismTrace& trace);
Json fairness_report_to_json(const FairnessReport& report);
Json pne_certificate_to_json(const PneCertificate& certificate, const Instance& instance,
                             const Mechanism& mechanism);
Json impossibility_audit_to_json(const ImpossibilityAudit& audit);
Json subadditive_report_to_json(const SubadditiveApsReport& report);

SignalProfile profile_from_json(const Json& j, const Instance& instance);

}  // namespace idv
