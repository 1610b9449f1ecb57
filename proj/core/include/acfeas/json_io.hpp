#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acfeas/certify.hpp"
#include "acfeas/network.hpp"
#include "acfeas/reduction.hpp"

namespace acfeas {

using json = nlohmann::json;

/// Reals travel as decimal strings with 17 significant digits so that
/// serialization round-trips bit exactly and diffs deterministically.
std::string format_real(double v);

/// Accepts the canonical string form or a plain JSON number.
double parse_real(const json& j);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const json& j);

json to_json(const Network& net);
Network network_from_json(const json& j);

json to_json(const OperatingPoint& pt);
OperatingPoint point_from_json(const json& j);

json to_json(const FeasibilityReport& rep);

json to_json(const gadget::BoundCertificate& cert);
json certificates_report(const std::vector<gadget::BoundCertificate>& certs);

json to_json(const reduction::ThroughputInstance& inst);
reduction::ThroughputInstance instance_from_json(const json& j);

json to_json(const reduction::DecodeReport& rep);
json to_json(const reduction::WitnessCheck& check);

std::string mode_name(gadget::Mode m);

/// Full manifold analysis of system B: per-mode states and throughput
/// ranges, the mode separation data, and the nominal-vs-measured
/// comparison with an explicit flag for every advertised throughput the
/// sweep cannot reach within 1e-6.
json analyze_b_report(int delta_grid);

}  // namespace acfeas
