#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace acfeas {

inline constexpr double kHalfPi = 1.5707963267948966;

/// Default slack absorbing representation rounding when limits are checked.
/// Conservation and sine-coupling use the caller-supplied epsilon instead;
/// limits are hard constraints.
inline constexpr double kDefaultLimitSlack = 1e-9;

enum class BusKind { Generator, Load, Internal };

/// A bus (network node). Injection is the net generation: positive values
/// generate, negative values consume. Generator buses may additionally carry
/// a capacity; an empty capacity means unbounded.
struct Bus {
  std::string id;
  double injection = 0.0;
  BusKind kind = BusKind::Internal;
  std::optional<double> capacity;
};

/// A directed line (arc). Flow on the line is sin(theta_from - theta_to) /
/// reactance and may be negative. An empty flow_limit means unbounded.
struct Line {
  std::string from;
  std::string to;
  double reactance = 1.0;
  std::optional<double> flow_limit;
  double angle_limit = kHalfPi;

  std::string key() const { return from + "->" + to; }
};

/// Bus/line lists; the node-arc incidence structure is implied by the line
/// endpoints. Use validate() after assembling one by hand.
struct Network {
  std::vector<Bus> buses;
  std::vector<Line> lines;

  /// Throws std::invalid_argument on dangling endpoints, self loops,
  /// duplicate ids, nonpositive reactance or out-of-range limits, and on
  /// injections violating the bus-kind conventions (generators in
  /// [0, capacity], loads <= 0, internal buses exactly 0).
  void validate() const;

  const Bus* find_bus(const std::string& id) const;
  const Line* find_line(const std::string& key) const;
};

/// Phase angles per bus plus explicit flows per line. Flows are stored
/// rather than derived so that points where the sine coupling holds only
/// approximately are representable.
struct OperatingPoint {
  std::map<std::string, double> angles;
  std::map<std::string, double> flows;
};

enum class LimitKind { Flow, Angle };

struct LimitViolation {
  std::string line;
  LimitKind kind = LimitKind::Flow;
  double magnitude = 0.0;  // amount above the limit
};

struct FeasibilityReport {
  double epsilon = 0.0;
  double limit_slack = kDefaultLimitSlack;
  double max_balance_residual = 0.0;
  double max_coupling_residual = 0.0;
  std::vector<LimitViolation> limit_violations;
  bool verdict = false;
};

/// Copies the angles through and sets every flow to
/// sin(theta_from - theta_to) / reactance.
/// Throws std::invalid_argument if an angle is missing for some bus.
OperatingPoint flow_from_angles(const Network& net,
                                const std::map<std::string, double>& angles);

/// Signed balance residual per bus: injection - (flow out - flow in).
std::map<std::string, double> balance_residuals(const Network& net,
                                                const OperatingPoint& pt);

/// Residual report at epsilon = 0.
FeasibilityReport residuals(const Network& net, const OperatingPoint& pt);

/// Verdict is true iff every balance and coupling residual is <= epsilon and
/// no flow or angle limit is exceeded (limits get limit_slack, not epsilon).
FeasibilityReport check_feasible(const Network& net, const OperatingPoint& pt,
                                 double epsilon,
                                 double limit_slack = kDefaultLimitSlack);

/// Total flow delivered into `sink`: flow in minus flow out over the lines
/// incident to it. Throws std::invalid_argument for an unknown sink.
double throughput(const Network& net, const OperatingPoint& pt,
                  const std::string& sink);

/// Copy of `net` with the listed bus injections replaced.
Network with_injections(Network net,
                        const std::map<std::string, double>& injections);

/// Copy of `net` whose generator and load injections are read off the
/// witness: each such bus gets the net outflow implied by pt's flows.
/// Internal buses keep injection 0. Witnesses carry generator outputs
/// implicitly; this pins them so the balance check is meaningful.
Network with_witness_injections(Network net, const OperatingPoint& pt);

}  // namespace acfeas
