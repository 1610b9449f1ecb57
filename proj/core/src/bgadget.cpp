#include "acfeas/bgadget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acfeas::gadget {

const BConstants& constants() {
  static const BConstants c = [] {
    BConstants k;
    k.theta0 = std::acos(4.0 / 5.0);
    k.theta1 = std::acos(1.0 / 5.0 + std::sqrt(1.0 / 25.0 + 1.0 / 2.0));
    return k;
  }();
  return c;
}

double BState::eps1() const {
  return std::sin(alpha - 2.0 * theta + delta) - std::sin(alpha - 2.0 * theta);
}

double BState::eps2() const {
  return std::sin(2.0 * theta - delta) - std::sin(2.0 * theta);
}

double delta_fn(double theta) {
  return -std::sin(theta) + 0.625 * std::sin(2.0 * theta);
}

double delta_deriv(double theta) {
  return -std::cos(theta) + 1.25 * std::cos(2.0 * theta);
}

Network b_network() {
  Network net;
  const double tp0 = 21.0 / 25.0;  // delta=0 Mode II throughput
  net.buses = {
      {"0", tp0, BusKind::Generator, std::nullopt},
      {"1", 0.0, BusKind::Internal, std::nullopt},
      {"2", 0.0, BusKind::Internal, std::nullopt},
      {"3", 0.0, BusKind::Internal, std::nullopt},
      {"4", -tp0, BusKind::Load, std::nullopt},
  };
  net.lines = {
      {"0", "1", 1.0, std::nullopt, kHalfPi},
      {"0", "2", 2.5, std::nullopt, kHalfPi},
      {"1", "2", 1.0, constants().delta_flow_limit, kHalfPi},
      {"1", "3", 1.0, std::nullopt, kHalfPi},
      {"3", "4", 1.0, std::nullopt, kHalfPi},
      {"2", "4", 4.0, std::nullopt, kHalfPi},
  };
  net.validate();
  return net;
}

std::pair<double, double> conservation_residuals(const BState& s) {
  const double r1 = std::sin(s.alpha - 2.0 * s.theta) - std::sin(s.delta) -
                    std::sin(s.theta);
  const double r2 = std::sin(s.alpha - 2.0 * s.theta + s.delta) / 2.5 +
                    std::sin(s.delta) - 0.25 * std::sin(2.0 * s.theta - s.delta);
  return {r1, r2};
}

double identity_check(const BState& s) {
  return std::abs(delta_fn(s.theta) - 3.5 * std::sin(s.delta) - s.eps1() +
                  0.625 * s.eps2());
}

Mode classify_mode(double theta) {
  const BConstants& k = constants();
  if (theta < 0.0 || theta > kHalfPi)
    throw std::domain_error("classify_mode: theta outside [0, pi/2]");
  if (theta <= k.modeI_hi) return Mode::I;
  if (theta >= k.modeII_lo && theta <= k.modeII_hi) return Mode::II;
  return Mode::Infeasible;
}

namespace {

// Reduced residual r2(theta) with alpha eliminated through r1 = 0, i.e.
// sin(alpha - 2 theta) = sin(delta) + sin(theta). Evaluated from sin/cos of
// theta alone so the 4096-point scans stay cheap. Returns nullopt where no
// admissible alpha exists (sin(delta) + sin(theta) outside [0, 1]; the flow
// on line (0,1) may not be negative).
struct ReducedResidual {
  double sd, cd;  // sin/cos of the fixed delta

  explicit ReducedResidual(double delta)
      : sd(std::sin(delta)), cd(std::cos(delta)) {}

  std::optional<double> operator()(double theta) const {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const double su = sd + st;  // sin(alpha - 2 theta)
    if (su < 0.0 || su > 1.0) return std::nullopt;
    const double cu = std::sqrt(std::max(0.0, 1.0 - su * su));
    const double sud = su * cd + cu * sd;   // sin(alpha - 2 theta + delta)
    const double s2t = 2.0 * st * ct;
    const double c2t = 1.0 - 2.0 * st * st;
    const double s2td = s2t * cd - c2t * sd;  // sin(2 theta - delta)
    return sud / 2.5 + sd - 0.25 * s2td;
  }
};

constexpr int kScanPoints = 4096;
constexpr double kThetaWidthTol = 1e-15;
constexpr double kResidualTol = 1e-12;

std::optional<BState> state_at(double theta, double delta) {
  const double su = std::sin(delta) + std::sin(theta);
  if (su < 0.0 || su > 1.0) return std::nullopt;
  BState s;
  s.theta = theta;
  s.delta = delta;
  s.alpha = 2.0 * theta + std::asin(su);
  // Admissibility of the solved state: nonnegative source flows and the
  // pi/2 angle caps at both source lines and line (2,4).
  const double u = s.alpha - 2.0 * theta;
  const double tol = 1e-12;
  if (u < std::max(0.0, -delta) - tol ||
      u > std::min(kHalfPi, kHalfPi - delta) + tol)
    return std::nullopt;
  const double t2 = 2.0 * theta;
  if (t2 < std::max(0.0, delta) - tol ||
      t2 > std::min(kHalfPi, kHalfPi + delta) + tol)
    return std::nullopt;
  return s;
}

}  // namespace

std::optional<BState> solve_manifold(double delta, Mode mode) {
  const BConstants& k = constants();
  if (mode == Mode::Infeasible)
    throw std::invalid_argument("solve_manifold: mode must be I or II");
  if (std::abs(std::sin(delta)) > k.delta_flow_limit)
    throw std::invalid_argument("solve_manifold: |sin delta| > 0.005");
  const double lo = (mode == Mode::I) ? 0.0 : k.modeII_lo;
  const double hi = (mode == Mode::I) ? k.modeI_hi : k.modeII_hi;

  const ReducedResidual r2(delta);
  double a = 0.0, b = 0.0, fa = 0.0;
  bool have_prev = false, have_bracket = false;
  for (int i = 0; i < kScanPoints; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(kScanPoints - 1);
    const auto f = r2(t);
    if (!f) {
      have_prev = false;
      continue;
    }
    if (*f == 0.0) return state_at(t, delta);
    if (have_prev && fa * (*f) < 0.0) {
      b = t;
      have_bracket = true;
      break;
    }
    a = t;
    fa = *f;
    have_prev = true;
  }
  if (!have_bracket) return std::nullopt;

  while (b - a > kThetaWidthTol) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const auto fm = r2(m);
    if (!fm) return std::nullopt;  // cannot happen inside a valid bracket
    if (*fm == 0.0) {
      a = b = m;
      break;
    }
    if (fa * (*fm) < 0.0) {
      b = m;
    } else {
      a = m;
      fa = *fm;
    }
  }
  const double theta = 0.5 * (a + b);
  const auto res = r2(theta);
  if (!res || std::abs(*res) > kResidualTol) return std::nullopt;
  return state_at(theta, delta);
}

double throughput_b(const BState& s) {
  return 0.25 * std::sin(2.0 * s.theta - s.delta) + std::sin(s.theta);
}

OperatingPoint b_operating_point(const BState& s) {
  std::map<std::string, double> angles = {
      {"0", s.alpha},
      {"1", 2.0 * s.theta},
      {"2", 2.0 * s.theta - s.delta},
      {"3", s.theta},
      {"4", 0.0},
  };
  return flow_from_angles(b_network(), angles);
}

ManifoldSweep sweep_manifold(Mode mode, int grid) {
  if (grid < 2)
    throw std::invalid_argument("sweep_manifold: grid must be >= 2");
  const double dmax = std::asin(constants().delta_flow_limit);
  ManifoldSweep sweep;
  sweep.mode = mode;
  sweep.grid = grid;
  bool first = true;
  for (int j = 0; j < grid; ++j) {
    const double delta =
        dmax * (2.0 * j - (grid - 1)) / static_cast<double>(grid - 1);
    const auto s = solve_manifold(delta, mode);
    if (!s) continue;
    sweep.states.push_back(*s);
    const double tp = throughput_b(*s);
    if (first || tp < sweep.tp_min) sweep.tp_min = tp;
    if (first || tp > sweep.tp_max) {
      sweep.tp_max = tp;
      sweep.best = *s;
    }
    if (first || s->alpha < sweep.alpha_min) sweep.alpha_min = s->alpha;
    if (first || s->alpha > sweep.alpha_max) sweep.alpha_max = s->alpha;
    first = false;
  }
  return sweep;
}

std::pair<double, double> mode_throughput_range(Mode mode, int grid) {
  const ManifoldSweep sweep = sweep_manifold(mode, grid);
  if (sweep.states.empty())
    throw std::runtime_error("mode_throughput_range: no manifold states found");
  return {sweep.tp_min, sweep.tp_max};
}

}  // namespace acfeas::gadget
