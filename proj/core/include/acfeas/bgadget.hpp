#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "acfeas/network.hpp"

namespace acfeas::gadget {

/// Named constants of the five-bus benchmark system B. One table so every
/// certificate and test reads the same literals.
struct BConstants {
  double theta0;                     // acos(4/5), the nonzero root of Delta
  double theta1;                     // acos(1/5 + sqrt(1/25 + 1/2)), Delta' root
  double delta_flow_limit = 0.005;   // flow limit on line (1,2)
  double delta_abs_bound = 0.0050001;  // |delta| bound implied by |sin d| <= 0.005
  double delta_big_bound = 0.02563;  // |Delta(theta)| bound on admissible states
  double modeI_hi = 0.1057;          // Mode I is theta in [0, modeI_hi]
  double modeII_lo = 0.578;          // Mode II is theta in [modeII_lo, modeII_hi]
  double modeII_hi = 0.6952;
  double modeI_tp_sup = 0.1592;      // strict upper bound on Mode I throughput
  double modeII_tp_lo = 0.77464;     // nominal Mode II throughput lower bound
  double modeII_tp_hi = 0.88671;     // strict upper bound on Mode II throughput
  double modeI_tp_claim = 0.1579;    // advertised attainable Mode I throughput
  double modeII_tp_claim = 0.88648;  // advertised attainable Mode II throughput
  double lipschitz_delta = 2.25;     // |Delta'| <= 9/4 on [0, pi/2]
  double lipschitz_delta_deriv = 3.5;  // |Delta''| <= 7/2 on [0, pi/2]
};

const BConstants& constants();

enum class Mode { I, II, Infeasible };

/// The three free parameters of a system-B operating point: theta is the
/// angle at bus 3, bus 2 sits at 2*theta - delta, alpha is the angle at
/// bus 0 (all relative to bus 4 at angle 0).
struct BState {
  double theta = 0.0;
  double delta = 0.0;
  double alpha = 0.0;

  double eps1() const;  // sin(alpha - 2 theta + delta) - sin(alpha - 2 theta)
  double eps2() const;  // sin(2 theta - delta) - sin(2 theta)
};

/// Delta(theta) = -sin(theta) + (5/8) sin(2 theta). Its near-zero level set
/// splits the admissible theta range into the two operating modes.
double delta_fn(double theta);

/// Delta'(theta) = -cos(theta) + (5/4) cos(2 theta).
double delta_deriv(double theta);

/// The five-bus network: lines (0,1) x=1, (0,2) x=2.5, (1,2) x=1 with flow
/// limit 0.005, (1,3) x=1, (3,4) x=1, (2,4) x=4; every angle limit pi/2.
/// Bus 0 generates, bus 4 consumes. Ships with the canonical delta=0 Mode II
/// injections (21/25 in, 21/25 out); use with_injections for other states.
Network b_network();

/// Flow-conservation residuals at buses 1 and 2:
///   r1 = sin(alpha - 2 theta) - sin(delta) - sin(theta)
///   r2 = (1/2.5) sin(alpha - 2 theta + delta) + sin(delta)
///        - (1/4) sin(2 theta - delta)
std::pair<double, double> conservation_residuals(const BState& s);

/// Residual of the reduced one-variable equation
///   Delta(theta) = (7/2) sin(delta) + eps1 - (5/8) eps2,
/// an algebraic consequence of r1 = r2 = 0. Returns its absolute value;
/// for states with r1 = 0 this equals (5/2)|r2|.
double identity_check(const BState& s);

/// Mode I for theta in [0, 0.1057], Mode II for theta in [0.578, 0.6952],
/// otherwise Infeasible. Throws std::domain_error outside [0, pi/2].
Mode classify_mode(double theta);

/// Finds the state solving both conservation equations with theta in the
/// given mode interval: a 4096-point scan locates a sign change of the
/// reduced residual, bisection then shrinks it below 1e-12. Returns nullopt
/// when the interval contains no sign change (e.g. Mode I with delta < 0).
/// Throws std::invalid_argument for |sin delta| > 0.005 or mode Infeasible.
std::optional<BState> solve_manifold(double delta, Mode mode);

/// Throughput of system B: (1/4) sin(2 theta - delta) + sin(theta).
double throughput_b(const BState& s);

/// Operating point on b_network(): angles (alpha, 2t, 2t - d, t, 0) at buses
/// (0, 1, 2, 3, 4); flows from the angles.
OperatingPoint b_operating_point(const BState& s);

struct ManifoldSweep {
  Mode mode = Mode::I;
  int grid = 0;
  std::vector<BState> states;  // found states, ascending delta
  double tp_min = 0.0;
  double tp_max = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  BState best;  // max-throughput state
};

/// Solves the manifold on a uniform `grid` of deltas spanning
/// [-asin(0.005), asin(0.005)] and aggregates the found states.
ManifoldSweep sweep_manifold(Mode mode, int grid);

/// (min, max) throughput over the sweep. Requires grid >= 2.
std::pair<double, double> mode_throughput_range(Mode mode, int grid);

}  // namespace acfeas::gadget
