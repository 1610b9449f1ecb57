#include "acfeas/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace acfeas::reduction {

namespace {

using gadget::BState;
using gadget::Mode;

std::string var_copy_prefix(int j, bool negated) {
  return "v" + std::to_string(j) + (negated ? ".Bbar" : ".B");
}

std::string clause_copy_prefix(int i, int slot) {
  return "c" + std::to_string(i) + "." + std::to_string(slot);
}

std::string coupler_id(int j, bool negated, const std::string& side) {
  return side + (negated ? "bar" : "") + std::to_string(j);
}

std::string copy_bus(const std::string& prefix, int b) {
  return prefix + "." + std::to_string(b);
}

// The six-line B copy under `prefix`, all buses internal.
void add_b_copy(Network& net, std::map<std::string, BusRole>& labels,
                const std::string& prefix, BusRole base) {
  for (int b = 0; b <= 4; ++b) {
    const std::string id = copy_bus(prefix, b);
    net.buses.push_back({id, 0.0, BusKind::Internal, std::nullopt});
    base.bus = b;
    labels[id] = base;
  }
  const double dlim = gadget::constants().delta_flow_limit;
  net.lines.push_back({copy_bus(prefix, 0), copy_bus(prefix, 1), 1.0,
                       std::nullopt, kHalfPi});
  net.lines.push_back({copy_bus(prefix, 0), copy_bus(prefix, 2), 2.5,
                       std::nullopt, kHalfPi});
  net.lines.push_back(
      {copy_bus(prefix, 1), copy_bus(prefix, 2), 1.0, dlim, kHalfPi});
  net.lines.push_back({copy_bus(prefix, 1), copy_bus(prefix, 3), 1.0,
                       std::nullopt, kHalfPi});
  net.lines.push_back({copy_bus(prefix, 3), copy_bus(prefix, 4), 1.0,
                       std::nullopt, kHalfPi});
  net.lines.push_back({copy_bus(prefix, 2), copy_bus(prefix, 4), 4.0,
                       std::nullopt, kHalfPi});
}

}  // namespace

CnfInstance InstanceStructure::to_cnf() const {
  CnfInstance cnf;
  cnf.num_vars = num_vars;
  for (const auto& lits : clauses) cnf.clauses.push_back({lits});
  return cnf;
}

InstanceStructure derive_structure(const ThroughputInstance& inst) {
  InstanceStructure st;
  int max_clause = 0;
  for (const auto& [id, role] : inst.label_map) {
    if (role.role == "variable_sink") st.num_vars = std::max(st.num_vars, role.variable);
    if (role.role == "clause_sink") max_clause = std::max(max_clause, role.clause);
  }
  st.clauses.resize(max_clause);
  for (const auto& [id, role] : inst.label_map) {
    if (role.role == "clause_copy_bus" && role.bus == 0)
      st.clauses.at(role.clause - 1).at(role.slot) = {role.variable,
                                                      role.negated};
  }
  return st;
}

ThroughputInstance compile(const CnfInstance& cnf) {
  if (cnf.num_vars < 1)
    throw std::invalid_argument("compile: instance has no variables");
  for (const Clause& c : cnf.clauses)
    for (const Literal& lit : c.lits)
      if (lit.var < 1 || lit.var > cnf.num_vars)
        throw std::invalid_argument("compile: literal out of range");

  using K = ReductionConstants;
  ThroughputInstance inst;
  Network& net = inst.network;
  auto& labels = inst.label_map;

  net.buses.push_back({"D", 0.0, BusKind::Load, std::nullopt});
  labels["D"] = {.role = "load"};
  inst.load = "D";

  for (int j = 1; j <= cnf.num_vars; ++j) {
    for (bool negated : {false, true}) {
      const std::string prefix = var_copy_prefix(j, negated);
      add_b_copy(net, labels, prefix,
                 {.role = "variable_copy_bus", .variable = j, .negated = negated});
      const std::string source = (negated ? "sbar" : "s") + std::to_string(j);
      net.buses.push_back(
          {source, 0.0, BusKind::Generator, K::variable_gen_capacity});
      labels[source] = {.role = "variable_source", .variable = j, .negated = negated};
      inst.generators.emplace_back(source, K::variable_gen_capacity);
      net.lines.push_back(
          {source, copy_bus(prefix, 0), 1.0, std::nullopt, kHalfPi});
    }
    const std::string sink = "t" + std::to_string(j);
    net.buses.push_back({sink, 0.0, BusKind::Internal, std::nullopt});
    labels[sink] = {.role = "variable_sink", .variable = j};
    net.lines.push_back({copy_bus(var_copy_prefix(j, false), 4), sink, 1.0,
                         std::nullopt, kHalfPi});
    net.lines.push_back({copy_bus(var_copy_prefix(j, true), 4), sink, 1.0,
                         std::nullopt, kHalfPi});
    for (bool negated : {false, true}) {
      for (const std::string side : {"L", "R"}) {
        const std::string id = coupler_id(j, negated, side);
        net.buses.push_back({id, 0.0, BusKind::Internal, std::nullopt});
        labels[id] = {.role = "coupler",
                      .variable = j,
                      .negated = negated,
                      .side = side};
      }
      const std::string prefix = var_copy_prefix(j, negated);
      net.lines.push_back({coupler_id(j, negated, "L"), copy_bus(prefix, 0),
                           K::coupler_reactance, K::coupler_limit, kHalfPi});
      net.lines.push_back({coupler_id(j, negated, "R"), copy_bus(prefix, 4),
                           K::coupler_reactance, K::coupler_limit, kHalfPi});
    }
    net.lines.push_back(
        {sink, "D", K::d_line_reactance, K::variable_d_limit, kHalfPi});
  }

  for (int i = 1; i <= static_cast<int>(cnf.clauses.size()); ++i) {
    const Clause& clause = cnf.clauses[i - 1];
    const std::string sink = "T" + std::to_string(i);
    net.buses.push_back({sink, 0.0, BusKind::Internal, std::nullopt});
    labels[sink] = {.role = "clause_sink", .clause = i};
    for (int k = 0; k < 3; ++k) {
      const Literal lit = clause.lits[k];
      const std::string prefix = clause_copy_prefix(i, k);
      add_b_copy(net, labels, prefix,
                 {.role = "clause_copy_bus",
                  .variable = lit.var,
                  .negated = lit.negated,
                  .clause = i,
                  .slot = k});
      const std::string source =
          "c" + std::to_string(i) + ".s" + std::to_string(k);
      net.buses.push_back(
          {source, 0.0, BusKind::Generator, K::clause_gen_capacity});
      labels[source] = {.role = "clause_source",
                        .variable = lit.var,
                        .negated = lit.negated,
                        .clause = i,
                        .slot = k};
      inst.generators.emplace_back(source, K::clause_gen_capacity);
      net.lines.push_back(
          {source, copy_bus(prefix, 0), 1.0, std::nullopt, kHalfPi});
      net.lines.push_back(
          {copy_bus(prefix, 4), sink, 1.0, std::nullopt, kHalfPi});
      net.lines.push_back({coupler_id(lit.var, lit.negated, "L"),
                           copy_bus(prefix, 0), K::coupler_reactance,
                           K::coupler_limit, kHalfPi});
      net.lines.push_back({coupler_id(lit.var, lit.negated, "R"),
                           copy_bus(prefix, 4), K::coupler_reactance,
                           K::coupler_limit, kHalfPi});
    }
    net.lines.push_back(
        {sink, "D", K::d_line_reactance, K::clause_d_limit, kHalfPi});
  }

  inst.threshold = cnf.num_vars * K::variable_d_limit +
                   static_cast<double>(cnf.clauses.size()) * K::clause_d_limit;
  net.validate();
  return inst;
}

namespace {

// arcsine chain: the angle difference a line needs to carry `flow`.
// Saturates at the pi/2 cap when reactance * flow leaves the sine range.
double chain_angle(double flow, double reactance) {
  const double s = reactance * flow;
  if (s >= 1.0) return kHalfPi;
  if (s <= -1.0) return -kHalfPi;
  return std::asin(s);
}

void set_copy_angles(std::map<std::string, double>& angles,
                     const std::string& prefix, double base,
                     const BState& s) {
  angles[copy_bus(prefix, 4)] = base;
  angles[copy_bus(prefix, 3)] = base + s.theta;
  angles[copy_bus(prefix, 1)] = base + 2.0 * s.theta;
  angles[copy_bus(prefix, 2)] = base + (2.0 * s.theta - s.delta);
  angles[copy_bus(prefix, 0)] = base + s.alpha;
}

const BState& best_mode2_state(int delta_grid) {
  static std::mutex mu;
  static std::map<int, BState> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(delta_grid);
  if (it == cache.end())
    it = cache.emplace(delta_grid,
                       gadget::sweep_manifold(Mode::II, delta_grid).best)
             .first;
  return it->second;
}

}  // namespace

OperatingPoint encode_witness(const ThroughputInstance& inst,
                              const Assignment& a, const EncodeOptions& opts) {
  const InstanceStructure st = derive_structure(inst);
  if (static_cast<int>(a.values.size()) != st.num_vars)
    throw std::invalid_argument("encode_witness: assignment does not cover " +
                                std::to_string(st.num_vars) + " variables");

  const BState mode2 = best_mode2_state(opts.delta_grid);
  const BState mode1 = *gadget::solve_manifold(0.0, Mode::I);
  const double tp2 = gadget::throughput_b(mode2);
  const double tp1 = gadget::throughput_b(mode1);  // exactly 0

  std::map<std::string, double> angles;
  std::map<std::string, double> source_output;
  angles["D"] = 0.0;

  auto side_state = [&](int j, bool negated) -> const BState& {
    const bool active = a.value(j) != negated;  // this side carries Mode II
    return active ? mode2 : mode1;
  };
  auto side_tp = [&](int j, bool negated) {
    return (a.value(j) != negated) ? tp2 : tp1;
  };

  for (int j = 1; j <= st.num_vars; ++j) {
    const double pair_flow = tp2 + tp1;
    const double t_angle =
        chain_angle(pair_flow, ReductionConstants::d_line_reactance);
    angles["t" + std::to_string(j)] = t_angle;
    for (bool negated : {false, true}) {
      const BState& s = side_state(j, negated);
      const double tp = side_tp(j, negated);
      const std::string prefix = var_copy_prefix(j, negated);
      const double base = t_angle + chain_angle(tp, 1.0);
      set_copy_angles(angles, prefix, base, s);
      const std::string source = (negated ? "sbar" : "s") + std::to_string(j);
      angles[source] = angles[copy_bus(prefix, 0)] + chain_angle(tp, 1.0);
      source_output[source] = tp;
      angles[coupler_id(j, negated, "L")] = angles[copy_bus(prefix, 0)];
      angles[coupler_id(j, negated, "R")] = angles[copy_bus(prefix, 4)];
    }
  }

  for (int i = 1; i <= static_cast<int>(st.clauses.size()); ++i) {
    double demand = 0.0;
    for (const Literal& lit : st.clauses[i - 1])
      demand += side_tp(lit.var, lit.negated);
    angles["T" + std::to_string(i)] =
        chain_angle(demand, ReductionConstants::d_line_reactance);
    for (int k = 0; k < 3; ++k) {
      const Literal lit = st.clauses[i - 1][k];
      const BState& s = side_state(lit.var, lit.negated);
      const double tp = side_tp(lit.var, lit.negated);
      const std::string prefix = clause_copy_prefix(i, k);
      // Coupled buses sit at identical angles, so both coupler lines of
      // this copy carry exactly zero.
      const double base =
          angles[copy_bus(var_copy_prefix(lit.var, lit.negated), 4)];
      set_copy_angles(angles, prefix, base, s);
      const std::string source =
          "c" + std::to_string(i) + ".s" + std::to_string(k);
      angles[source] = angles[copy_bus(prefix, 0)] + chain_angle(tp, 1.0);
      source_output[source] = tp;
    }
  }

  if (inst.label_map.count("G") != 0) {
    // Single-generator form: chain G off the first source line.
    for (const Line& l : inst.network.lines) {
      if (l.from == "G") {
        angles["G"] = angles.at(l.to) + chain_angle(source_output[l.to], 1.0);
        break;
      }
    }
  }

  return flow_from_angles(inst.network, angles);
}

namespace {

// Internal theta of a B copy, with a guard for harmless rounding just
// outside [0, pi/2].
std::optional<double> copy_theta(const OperatingPoint& pt,
                                 const std::string& prefix) {
  const auto hi = pt.angles.find(copy_bus(prefix, 3));
  const auto lo = pt.angles.find(copy_bus(prefix, 4));
  if (hi == pt.angles.end() || lo == pt.angles.end()) return std::nullopt;
  double theta = hi->second - lo->second;
  if (theta < 0.0 && theta >= -1e-9) theta = 0.0;
  if (theta > kHalfPi && theta <= kHalfPi + 1e-9) theta = kHalfPi;
  if (theta < 0.0 || theta > kHalfPi) return std::nullopt;
  return theta;
}

}  // namespace

DecodeReport decode_witness(const ThroughputInstance& inst,
                            const OperatingPoint& pt) {
  const InstanceStructure st = derive_structure(inst);
  DecodeReport rep;
  rep.assignment.values.assign(st.num_vars, false);

  auto mode_of = [&](const std::string& prefix) {
    const auto theta = copy_theta(pt, prefix);
    if (!theta) {
      rep.infeasible_copies.push_back(prefix);
      return Mode::Infeasible;
    }
    const Mode m = gadget::classify_mode(*theta);
    if (m == Mode::Infeasible) rep.infeasible_copies.push_back(prefix);
    return m;
  };

  bool pairs_ok = true;
  for (int j = 1; j <= st.num_vars; ++j) {
    const Mode pos = mode_of(var_copy_prefix(j, false));
    const Mode neg = mode_of(var_copy_prefix(j, true));
    rep.per_variable_modes[j] = {pos, neg};
    rep.assignment.values[j - 1] = pos == Mode::II;
    const int mode2 = (pos == Mode::II ? 1 : 0) + (neg == Mode::II ? 1 : 0);
    pairs_ok = pairs_ok && mode2 == 1;
  }

  const double angle_bound = ReductionConstants::mode_separation_bound;
  bool triples_ok = true;
  for (int i = 1; i <= static_cast<int>(st.clauses.size()); ++i) {
    std::array<Mode, 3> modes{};
    for (int k = 0; k < 3; ++k) {
      const Literal lit = st.clauses[i - 1][k];
      const std::string prefix = clause_copy_prefix(i, k);
      modes[k] = mode_of(prefix);
      // A coupler within its angle bound forces equal modes; report when
      // the data contradicts that.
      const std::string vprefix = var_copy_prefix(lit.var, lit.negated);
      const auto a0 = pt.angles.find(copy_bus(prefix, 0));
      const auto v0 = pt.angles.find(copy_bus(vprefix, 0));
      if (a0 != pt.angles.end() && v0 != pt.angles.end() &&
          std::abs(a0->second - v0->second) <= angle_bound) {
        const auto& pair = rep.per_variable_modes[lit.var];
        const Mode vmode = lit.negated ? pair.second : pair.first;
        if (vmode != Mode::Infeasible && modes[k] != Mode::Infeasible &&
            vmode != modes[k])
          rep.coupler_modes_agree = false;
      }
    }
    rep.per_clause_modes[i] = modes;
    int mode2 = 0;
    for (const Mode m : modes) mode2 += m == Mode::II ? 1 : 0;
    triples_ok = triples_ok && mode2 == 1;
  }

  for (const Line& l : inst.network.lines) {
    const auto f = pt.flows.find(l.key());
    const double flow = f == pt.flows.end() ? 0.0 : f->second;
    if (l.to == inst.load || l.from == inst.load)
      rep.d_line_loads[l.key()] = {flow, l.flow_limit};
    const auto from_role = inst.label_map.find(l.from);
    if (from_role != inst.label_map.end() &&
        from_role->second.role == "coupler")
      rep.max_coupler_flow = std::max(rep.max_coupler_flow, std::abs(flow));
  }

  rep.consistent = pairs_ok && triples_ok && rep.infeasible_copies.empty();
  rep.one_in_three_ok = verify_one_in_three(st.to_cnf(), rep.assignment);
  return rep;
}

ThroughputInstance super_source_transform(const ThroughputInstance& inst) {
  if (inst.label_map.count("G") != 0)
    throw std::invalid_argument("super_source_transform: already transformed");
  ThroughputInstance out = inst;
  double total = 0.0;
  for (const auto& [bus, capacity] : inst.generators) {
    total += capacity;
    for (Bus& b : out.network.buses)
      if (b.id == bus) b.kind = BusKind::Internal;
    out.network.lines.push_back({"G", bus, 1.0, capacity, kHalfPi});
  }
  out.network.buses.push_back({"G", 0.0, BusKind::Generator, total});
  out.label_map["G"] = {.role = "super_source"};
  out.generators = {{"G", total}};
  out.network.validate();
  return out;
}

WitnessCheck check_witness(const ThroughputInstance& inst,
                           const OperatingPoint& pt, double epsilon,
                           double slack) {
  WitnessCheck out;
  const Network net = with_witness_injections(inst.network, pt);
  for (const auto& [bus, capacity] : inst.generators) {
    const Bus* b = net.find_bus(bus);
    if (b && (b->injection < -kDefaultLimitSlack ||
              b->injection > capacity + kDefaultLimitSlack))
      out.capacity_violations.push_back(bus);
  }
  out.feasibility = check_feasible(net, pt, epsilon);
  out.demand = throughput(net, pt, inst.load);
  out.threshold = inst.threshold;
  out.slack = slack;
  out.demand_ok = out.demand >= inst.threshold - slack;
  out.ok = out.feasibility.verdict && out.capacity_violations.empty() &&
           out.demand_ok;
  return out;
}

double default_check_slack(const ThroughputInstance& inst) {
  const InstanceStructure st = derive_structure(inst);
  return 2e-2 * (st.num_vars + static_cast<double>(st.clauses.size()));
}

}  // namespace acfeas::reduction
