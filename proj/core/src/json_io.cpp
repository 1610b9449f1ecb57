#include "acfeas/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "acfeas/bgadget.hpp"

namespace acfeas {

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

double parse_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
      throw std::invalid_argument("not a decimal real: '" + s + "'");
    return v;
  }
  throw std::invalid_argument("expected a real (string or number)");
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

json limit_to_json(const std::optional<double>& limit) {
  return limit ? json(format_real(*limit)) : json("unbounded");
}

std::optional<double> limit_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "unbounded")
    return std::nullopt;
  return parse_real(j);
}

std::string kind_name(BusKind k) {
  switch (k) {
    case BusKind::Generator: return "generator";
    case BusKind::Load: return "load";
    case BusKind::Internal: return "internal";
  }
  return "internal";
}

BusKind kind_from_name(const std::string& s) {
  if (s == "generator") return BusKind::Generator;
  if (s == "load") return BusKind::Load;
  if (s == "internal") return BusKind::Internal;
  throw std::invalid_argument("unknown bus kind '" + s + "'");
}

}  // namespace

std::string mode_name(gadget::Mode m) {
  switch (m) {
    case gadget::Mode::I: return "I";
    case gadget::Mode::II: return "II";
    case gadget::Mode::Infeasible: return "infeasible";
  }
  return "infeasible";
}

json to_json(const Network& net) {
  json buses = json::array();
  for (const Bus& b : net.buses)
    buses.push_back({{"id", b.id},
                     {"injection", format_real(b.injection)},
                     {"kind", kind_name(b.kind)},
                     {"capacity", limit_to_json(b.capacity)}});
  json lines = json::array();
  for (const Line& l : net.lines)
    lines.push_back({{"from", l.from},
                     {"to", l.to},
                     {"reactance", format_real(l.reactance)},
                     {"flow_limit", limit_to_json(l.flow_limit)},
                     {"angle_limit", format_real(l.angle_limit)}});
  return {{"buses", buses}, {"lines", lines}};
}

Network network_from_json(const json& j) {
  Network net;
  for (const json& b : j.at("buses"))
    net.buses.push_back({b.at("id").get<std::string>(),
                         parse_real(b.at("injection")),
                         kind_from_name(b.at("kind").get<std::string>()),
                         limit_from_json(b.at("capacity"))});
  for (const json& l : j.at("lines"))
    net.lines.push_back({l.at("from").get<std::string>(),
                         l.at("to").get<std::string>(),
                         parse_real(l.at("reactance")),
                         limit_from_json(l.at("flow_limit")),
                         parse_real(l.at("angle_limit"))});
  net.validate();
  return net;
}

json to_json(const OperatingPoint& pt) {
  json angles = json::object();
  for (const auto& [id, v] : pt.angles) angles[id] = format_real(v);
  json flows = json::object();
  for (const auto& [key, v] : pt.flows) flows[key] = format_real(v);
  return {{"angles", angles}, {"flows", flows}};
}

OperatingPoint point_from_json(const json& j) {
  OperatingPoint pt;
  for (const auto& [id, v] : j.at("angles").items())
    pt.angles[id] = parse_real(v);
  for (const auto& [key, v] : j.at("flows").items())
    pt.flows[key] = parse_real(v);
  return pt;
}

json to_json(const FeasibilityReport& rep) {
  json violations = json::array();
  for (const LimitViolation& v : rep.limit_violations)
    violations.push_back(
        {{"line", v.line},
         {"kind", v.kind == LimitKind::Flow ? "flow" : "angle"},
         {"magnitude", format_real(v.magnitude)}});
  return {{"epsilon", format_real(rep.epsilon)},
          {"limit_slack", format_real(rep.limit_slack)},
          {"max_balance_residual", format_real(rep.max_balance_residual)},
          {"max_coupling_residual", format_real(rep.max_coupling_residual)},
          {"limit_violations", violations},
          {"verdict", rep.verdict}};
}

json to_json(const gadget::BoundCertificate& cert) {
  json region = json::array();
  for (const gadget::Interval& iv : cert.checked_region)
    region.push_back({format_real(iv.lo), format_real(iv.hi)});
  return {{"claim", cert.claim},
          {"statement", cert.statement},
          {"checked_region", region},
          {"requested_step", format_real(cert.requested_step)},
          {"grid_step", format_real(cert.grid_step)},
          {"lipschitz_constant", format_real(cert.lipschitz_constant)},
          {"margin", format_real(cert.margin)},
          {"holds", cert.holds},
          {"note", cert.note}};
}

json certificates_report(const std::vector<gadget::BoundCertificate>& certs) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : certs) {
    arr.push_back(to_json(c));
    all = all && c.holds;
  }
  return {{"certificates", arr}, {"all_hold", all}};
}

namespace {

json role_to_json(const reduction::BusRole& r) {
  json j = {{"role", r.role}};
  if (r.variable > 0) {
    j["variable"] = r.variable;
    j["negated"] = r.negated;
  }
  if (r.clause > 0) j["clause"] = r.clause;
  if (r.slot >= 0) j["slot"] = r.slot;
  if (r.bus >= 0) j["bus"] = r.bus;
  if (!r.side.empty()) j["side"] = r.side;
  return j;
}

reduction::BusRole role_from_json(const json& j) {
  reduction::BusRole r;
  r.role = j.at("role").get<std::string>();
  if (j.contains("variable")) r.variable = j.at("variable").get<int>();
  if (j.contains("negated")) r.negated = j.at("negated").get<bool>();
  if (j.contains("clause")) r.clause = j.at("clause").get<int>();
  if (j.contains("slot")) r.slot = j.at("slot").get<int>();
  if (j.contains("bus")) r.bus = j.at("bus").get<int>();
  if (j.contains("side")) r.side = j.at("side").get<std::string>();
  return r;
}

}  // namespace

json to_json(const reduction::ThroughputInstance& inst) {
  json j = to_json(inst.network);
  json generators = json::array();
  for (const auto& [bus, capacity] : inst.generators)
    generators.push_back({{"bus", bus}, {"capacity", format_real(capacity)}});
  j["generators"] = generators;
  j["load"] = inst.load;
  j["threshold"] = format_real(inst.threshold);
  json labels = json::object();
  for (const auto& [id, role] : inst.label_map) labels[id] = role_to_json(role);
  j["labels"] = labels;
  return j;
}

reduction::ThroughputInstance instance_from_json(const json& j) {
  reduction::ThroughputInstance inst;
  inst.network = network_from_json(j);
  for (const json& g : j.at("generators"))
    inst.generators.emplace_back(g.at("bus").get<std::string>(),
                                 parse_real(g.at("capacity")));
  inst.load = j.at("load").get<std::string>();
  inst.threshold = parse_real(j.at("threshold"));
  for (const auto& [id, role] : j.at("labels").items())
    inst.label_map[id] = role_from_json(role);
  return inst;
}

json to_json(const reduction::DecodeReport& rep) {
  json assignment = json::object();
  for (size_t i = 0; i < rep.assignment.values.size(); ++i)
    assignment[std::to_string(i + 1)] = static_cast<bool>(rep.assignment.values[i]);
  json variable_modes = json::object();
  for (const auto& [j_var, modes] : rep.per_variable_modes)
    variable_modes[std::to_string(j_var)] = {mode_name(modes.first),
                                             mode_name(modes.second)};
  json clause_modes = json::object();
  for (const auto& [i, modes] : rep.per_clause_modes)
    clause_modes[std::to_string(i)] = {mode_name(modes[0]),
                                       mode_name(modes[1]),
                                       mode_name(modes[2])};
  json loads = json::object();
  for (const auto& [line, load] : rep.d_line_loads)
    loads[line] = {{"flow", format_real(load.flow)},
                   {"limit", limit_to_json(load.limit)}};
  return {{"assignment", assignment},
          {"per_variable_modes", variable_modes},
          {"per_clause_modes", clause_modes},
          {"d_line_loads", loads},
          {"infeasible_copies", rep.infeasible_copies},
          {"max_coupler_flow", format_real(rep.max_coupler_flow)},
          {"coupler_modes_agree", rep.coupler_modes_agree},
          {"consistent", rep.consistent},
          {"one_in_three_ok", rep.one_in_three_ok}};
}

json to_json(const reduction::WitnessCheck& check) {
  json j = to_json(check.feasibility);
  j["capacity_violations"] = check.capacity_violations;
  j["demand"] = format_real(check.demand);
  j["threshold"] = format_real(check.threshold);
  j["slack"] = format_real(check.slack);
  j["demand_ok"] = check.demand_ok;
  j["ok"] = check.ok;
  return j;
}

namespace {

json sweep_to_json(const gadget::ManifoldSweep& sweep) {
  using gadget::throughput_b;
  json states = json::array();
  // Decimate long sweeps; endpoints and the best state always appear.
  const size_t stride =
      std::max<size_t>(1, sweep.states.size() / 1000);
  for (size_t idx = 0; idx < sweep.states.size(); ++idx) {
    const bool keep = idx % stride == 0 || idx + 1 == sweep.states.size() ||
                      sweep.states[idx].delta == sweep.best.delta;
    if (!keep) continue;
    const gadget::BState& s = sweep.states[idx];
    states.push_back({{"delta", format_real(s.delta)},
                      {"theta", format_real(s.theta)},
                      {"alpha", format_real(s.alpha)},
                      {"eps1", format_real(s.eps1())},
                      {"eps2", format_real(s.eps2())},
                      {"throughput", format_real(throughput_b(s))}});
  }
  return {{"found", sweep.states.size()},
          {"states", states},
          {"throughput_min", format_real(sweep.tp_min)},
          {"throughput_max", format_real(sweep.tp_max)},
          {"alpha_min", format_real(sweep.alpha_min)},
          {"alpha_max", format_real(sweep.alpha_max)},
          {"best", {{"delta", format_real(sweep.best.delta)},
                    {"theta", format_real(sweep.best.theta)},
                    {"throughput", format_real(throughput_b(sweep.best))}}}};
}

json claimed_point_to_json(double theta, double tp_claim, double measured_max) {
  using namespace gadget;
  // Residual of the conservation system at the advertised point: with
  // delta = 0 the reduced residual is -Delta(theta)/2.5.
  const BState s{theta, 0.0,
                 2.0 * theta + std::asin(std::sin(theta))};
  const auto [r1, r2] = conservation_residuals(s);
  const bool reached = measured_max >= tp_claim - 1e-6;
  return {{"theta", format_real(theta)},
          {"delta", format_real(0.0)},
          {"conservation_residual_r1", format_real(r1)},
          {"conservation_residual_r2", format_real(r2)},
          {"on_manifold", std::abs(r2) <= 1e-12},
          {"formula_throughput",
           format_real(throughput_b(BState{theta, 0.0, 0.0}))},
          {"claimed_throughput", format_real(tp_claim)},
          {"measured_max_throughput", format_real(measured_max)},
          {"reachable_within_1e-6", reached},
          {"flag_unreachable", !reached}};
}

}  // namespace

json analyze_b_report(int delta_grid) {
  using namespace gadget;
  const BConstants& k = constants();
  const ManifoldSweep sweep1 = sweep_manifold(Mode::I, delta_grid);
  const ManifoldSweep sweep2 = sweep_manifold(Mode::II, delta_grid);

  const double coupler_bound =
      2.0 * std::asin(reduction::ReductionConstants::coupler_limit *
                      reduction::ReductionConstants::coupler_reactance);
  json separation = {
      {"alpha_modeI_max", format_real(sweep1.alpha_max)},
      {"alpha_modeII_min", format_real(sweep2.alpha_min)},
      {"gap", format_real(sweep2.alpha_min - sweep1.alpha_max)},
      {"coupled_pair_angle_bound", format_real(coupler_bound)},
      {"separated",
       sweep1.alpha_max + 2.0 * coupler_bound < sweep2.alpha_min}};

  json bounds = {
      {"modeI_throughput_sup", format_real(k.modeI_tp_sup)},
      {"modeI_max_below_sup", sweep1.tp_max < k.modeI_tp_sup},
      {"modeII_throughput_sup", format_real(k.modeII_tp_hi)},
      {"modeII_max_below_sup", sweep2.tp_max < k.modeII_tp_hi},
      {"modeII_throughput_nominal_lo", format_real(k.modeII_tp_lo)},
      {"modeII_min_above_nominal_lo", sweep2.tp_min >= k.modeII_tp_lo}};

  json claimed = json::array();
  claimed.push_back(
      claimed_point_to_json(k.modeI_hi, k.modeI_tp_claim, sweep1.tp_max));
  claimed.push_back(
      claimed_point_to_json(k.modeII_hi, k.modeII_tp_claim, sweep2.tp_max));

  return {{"delta_grid", delta_grid},
          {"theta0", format_real(k.theta0)},
          {"theta1", format_real(k.theta1)},
          {"modeI", sweep_to_json(sweep1)},
          {"modeII", sweep_to_json(sweep2)},
          {"bound_checks", bounds},
          {"claimed_points", claimed},
          {"mode_separation", separation},
          {"pair_throughput_max",
           format_real(sweep1.tp_max + sweep2.tp_max)},
          {"pair_throughput_nominal",
           format_real(reduction::ReductionConstants::variable_d_limit)}};
}

}  // namespace acfeas
