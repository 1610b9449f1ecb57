#pragma once

#include <string>
#include <vector>

namespace acfeas::gadget {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Outcome of one machine-checked inequality. A grid claim is certified
/// cell by cell: a cell [x0, x1] passes when f(x0) + f(x1) > L (x1 - x0),
/// which bounds the interior minimum away from zero by the Lipschitz
/// constant L; failing cells are bisected until they pass or reach the
/// refinement floor. grid_step records the finest spacing actually used,
/// margin the worst evaluated slack.
struct BoundCertificate {
  std::string claim;      // C1..C5
  std::string statement;  // the certified inequality, human readable
  std::vector<Interval> checked_region;
  double requested_step = 0.0;
  double grid_step = 0.0;
  double lipschitz_constant = 0.0;
  double margin = 0.0;
  bool holds = false;
  std::string note;
};

/// The certificate family:
///   C1  Delta has no zero on [g, theta0-g] u [theta0+g, pi/2], g = 64 step
///   C2  Delta' > 0 left of theta1 - g and < 0 right of theta1 + g
///   C3  {theta : |Delta(theta)| <= 0.02563} lies inside
///       [0, 0.1057] u [0.578, 0.6952]
///   C4  |sin(phi) - sin(phi - delta)| <= |delta| on sampled admissible
///       (phi, delta) pairs
///   C5  (7/2 + 1 + 5/8) / 200 = 41/1600 <= 0.02563, in exact integers
/// Requires 0 < grid_step <= 1e-4.
std::vector<BoundCertificate> verify_bounds(double grid_step);

}  // namespace acfeas::gadget
