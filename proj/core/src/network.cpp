#include "acfeas/network.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace acfeas {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Every bus and every line of `net` must appear in `pt` exactly once.
void require_dimensioned(const Network& net, const OperatingPoint& pt) {
  require(pt.angles.size() == net.buses.size(),
          "operating point has " + std::to_string(pt.angles.size()) +
              " angles for " + std::to_string(net.buses.size()) + " buses");
  require(pt.flows.size() == net.lines.size(),
          "operating point has " + std::to_string(pt.flows.size()) +
              " flows for " + std::to_string(net.lines.size()) + " lines");
  for (const Bus& b : net.buses)
    require(pt.angles.count(b.id) != 0, "missing angle for bus " + b.id);
  for (const Line& l : net.lines)
    require(pt.flows.count(l.key()) != 0, "missing flow for line " + l.key());
}

}  // namespace

void Network::validate() const {
  std::set<std::string> ids;
  for (const Bus& b : buses) {
    require(!b.id.empty(), "bus with empty id");
    require(ids.insert(b.id).second, "duplicate bus id " + b.id);
    if (b.capacity) require(*b.capacity >= 0.0, "negative capacity at " + b.id);
    switch (b.kind) {
      case BusKind::Generator:
        require(b.injection >= 0.0 &&
                    (!b.capacity || b.injection <= *b.capacity),
                "generator injection out of [0, capacity] at " + b.id);
        break;
      case BusKind::Load:
        require(b.injection <= 0.0, "positive injection at load " + b.id);
        break;
      case BusKind::Internal:
        require(b.injection == 0.0, "nonzero injection at internal " + b.id);
        break;
    }
  }
  std::set<std::string> keys;
  for (const Line& l : lines) {
    require(ids.count(l.from) != 0, "unknown endpoint " + l.from);
    require(ids.count(l.to) != 0, "unknown endpoint " + l.to);
    require(l.from != l.to, "self loop at " + l.from);
    require(keys.insert(l.key()).second, "duplicate line " + l.key());
    require(l.reactance > 0.0, "nonpositive reactance on " + l.key());
    if (l.flow_limit)
      require(*l.flow_limit > 0.0, "nonpositive flow limit on " + l.key());
    require(l.angle_limit > 0.0 && l.angle_limit <= kHalfPi,
            "angle limit outside (0, pi/2] on " + l.key());
  }
}

const Bus* Network::find_bus(const std::string& id) const {
  for (const Bus& b : buses)
    if (b.id == id) return &b;
  return nullptr;
}

const Line* Network::find_line(const std::string& key) const {
  for (const Line& l : lines)
    if (l.key() == key) return &l;
  return nullptr;
}

OperatingPoint flow_from_angles(const Network& net,
                                const std::map<std::string, double>& angles) {
  for (const Bus& b : net.buses)
    require(angles.count(b.id) != 0, "missing angle for bus " + b.id);
  OperatingPoint pt;
  pt.angles = angles;
  for (const Line& l : net.lines) {
    const double diff = angles.at(l.from) - angles.at(l.to);
    pt.flows[l.key()] = std::sin(diff) / l.reactance;
  }
  return pt;
}

std::map<std::string, double> balance_residuals(const Network& net,
                                                const OperatingPoint& pt) {
  require_dimensioned(net, pt);
  std::map<std::string, double> out;
  for (const Bus& b : net.buses) out[b.id] = b.injection;
  for (const Line& l : net.lines) {
    const double f = pt.flows.at(l.key());
    out[l.from] -= f;
    out[l.to] += f;
  }
  return out;
}

namespace {

FeasibilityReport build_report(const Network& net, const OperatingPoint& pt,
                               double epsilon, double limit_slack) {
  FeasibilityReport rep;
  rep.epsilon = epsilon;
  rep.limit_slack = limit_slack;
  for (const auto& [bus, r] : balance_residuals(net, pt))
    rep.max_balance_residual = std::max(rep.max_balance_residual, std::abs(r));
  for (const Line& l : net.lines) {
    const double f = pt.flows.at(l.key());
    const double diff = pt.angles.at(l.from) - pt.angles.at(l.to);
    const double coupling = std::abs(std::sin(diff) - l.reactance * f);
    rep.max_coupling_residual = std::max(rep.max_coupling_residual, coupling);
    if (l.flow_limit && std::abs(f) > *l.flow_limit + limit_slack)
      rep.limit_violations.push_back(
          {l.key(), LimitKind::Flow, std::abs(f) - *l.flow_limit});
    if (std::abs(diff) > l.angle_limit + limit_slack)
      rep.limit_violations.push_back(
          {l.key(), LimitKind::Angle, std::abs(diff) - l.angle_limit});
  }
  rep.verdict = rep.max_balance_residual <= epsilon &&
                rep.max_coupling_residual <= epsilon &&
                rep.limit_violations.empty();
  return rep;
}

}  // namespace

FeasibilityReport residuals(const Network& net, const OperatingPoint& pt) {
  return build_report(net, pt, 0.0, kDefaultLimitSlack);
}

FeasibilityReport check_feasible(const Network& net, const OperatingPoint& pt,
                                 double epsilon, double limit_slack) {
  if (!(epsilon >= 0.0))
    throw std::invalid_argument("check_feasible: negative epsilon");
  return build_report(net, pt, epsilon, limit_slack);
}

double throughput(const Network& net, const OperatingPoint& pt,
                  const std::string& sink) {
  require(net.find_bus(sink) != nullptr, "unknown sink bus " + sink);
  require_dimensioned(net, pt);
  double in = 0.0;
  for (const Line& l : net.lines) {
    const double f = pt.flows.at(l.key());
    if (l.to == sink) in += f;
    if (l.from == sink) in -= f;
  }
  return in;
}

Network with_injections(Network net,
                        const std::map<std::string, double>& injections) {
  for (Bus& b : net.buses) {
    auto it = injections.find(b.id);
    if (it != injections.end()) b.injection = it->second;
  }
  return net;
}

Network with_witness_injections(Network net, const OperatingPoint& pt) {
  require_dimensioned(net, pt);
  std::map<std::string, double> outflow;
  for (const Line& l : net.lines) {
    const double f = pt.flows.at(l.key());
    outflow[l.from] += f;
    outflow[l.to] -= f;
  }
  for (Bus& b : net.buses)
    if (b.kind != BusKind::Internal) b.injection = outflow[b.id];
  return net;
}

}  // namespace acfeas
