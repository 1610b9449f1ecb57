#include "acfeas/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "acfeas/bgadget.hpp"
#include "acfeas/network.hpp"

namespace acfeas::gadget {

namespace {

struct RegionState {
  double margin = std::numeric_limits<double>::infinity();
  double finest = 0.0;
  bool ok = true;
  std::string note;
};

// Certify f > 0 on [x0, x1] given endpoint values, bisecting while the
// two-point Lipschitz bound is inconclusive.
template <typename F>
void certify_cell(const F& f, double x0, double f0, double x1, double f1,
                  double lipschitz, double min_step, RegionState& st) {
  if (!st.ok) return;
  st.margin = std::min(st.margin, std::min(f0, f1));
  if (f0 <= 0.0 || f1 <= 0.0) {
    st.ok = false;
    st.note = "claim fails at an evaluated point near " +
              std::to_string(f0 <= 0.0 ? x0 : x1);
    return;
  }
  const double h = x1 - x0;
  if (f0 + f1 > lipschitz * h) {
    st.finest = (st.finest == 0.0) ? h : std::min(st.finest, h);
    return;
  }
  if (0.5 * h < min_step) {
    st.ok = false;
    st.note = "grid too coarse to certify near " + std::to_string(x0);
    return;
  }
  const double xm = 0.5 * (x0 + x1);
  const double fm = f(xm);
  certify_cell(f, x0, f0, xm, fm, lipschitz, min_step, st);
  certify_cell(f, xm, fm, x1, f1, lipschitz, min_step, st);
}

template <typename F>
void certify_positive(const F& f, double a, double b, double step,
                      double lipschitz, double min_step, RegionState& st) {
  const int cells = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
  double x0 = a;
  double f0 = f(a);
  for (int i = 1; i <= cells && st.ok; ++i) {
    const double x1 = (i == cells) ? b : a + (b - a) * i / cells;
    const double f1 = f(x1);
    certify_cell(f, x0, f0, x1, f1, lipschitz, min_step, st);
    x0 = x1;
    f0 = f1;
  }
}

template <typename F>
BoundCertificate grid_certificate(const std::string& id,
                                  const std::string& statement, const F& f,
                                  std::vector<Interval> region, double step,
                                  double lipschitz) {
  RegionState st;
  for (const Interval& iv : region)
    certify_positive(f, iv.lo, iv.hi, step, lipschitz, step / 4096.0, st);
  BoundCertificate cert;
  cert.claim = id;
  cert.statement = statement;
  cert.checked_region = std::move(region);
  cert.requested_step = step;
  cert.grid_step = st.ok ? st.finest : step;
  cert.lipschitz_constant = lipschitz;
  cert.margin = st.margin;
  cert.holds = st.ok;
  cert.note = st.note;
  return cert;
}

BoundCertificate certificate_c4(double step) {
  // Sampled check of |sin(phi) - sin(phi - delta)| <= |delta| over the
  // admissible band phi in [max(0, delta), min(pi/2, pi/2 + delta)]. The
  // inequality becomes tight as delta -> 0, so this is a pointwise sample
  // certificate, not a Lipschitz-extended one.
  const BConstants& k = constants();
  double margin = std::numeric_limits<double>::infinity();
  bool ok = true;
  const int kDeltaSamples = 100;
  const int kPhiSamples = 400;
  for (int sd = -kDeltaSamples; sd <= kDeltaSamples && ok; ++sd) {
    if (sd == 0) continue;  // zero slack by symmetry; excluded
    const double delta = k.delta_abs_bound * sd / kDeltaSamples;
    const double lo = std::max(0.0, delta);
    const double hi = std::min(kHalfPi, kHalfPi + delta);
    for (int sp = 0; sp <= kPhiSamples; ++sp) {
      const double phi = lo + (hi - lo) * sp / kPhiSamples;
      const double slack =
          std::abs(delta) - std::abs(std::sin(phi) - std::sin(phi - delta));
      margin = std::min(margin, slack);
      if (slack < 0.0) {
        ok = false;
        break;
      }
    }
  }
  BoundCertificate cert;
  cert.claim = "C4";
  cert.statement =
      "|sin(phi) - sin(phi - delta)| <= |delta| on the admissible band";
  cert.checked_region = {{-constants().delta_abs_bound,
                          constants().delta_abs_bound}};
  cert.requested_step = step;
  cert.grid_step = constants().delta_abs_bound / kDeltaSamples;
  cert.lipschitz_constant = 0.0;
  cert.margin = margin;
  cert.holds = ok;
  cert.note = "pointwise sample check; the bound is tight as delta -> 0";
  return cert;
}

BoundCertificate certificate_c5() {
  // (7/2) d + d + (5/8) d at d = 1/200 is 41/1600; compare with
  // 0.02563 = 2563/100000 in exact integer arithmetic.
  const std::int64_t lhs = 41LL * 100000LL;   // 41/1600 scaled by 1600*100000
  const std::int64_t rhs = 2563LL * 1600LL;
  BoundCertificate cert;
  cert.claim = "C5";
  cert.statement = "(7/2 + 1 + 5/8) * (1/200) = 41/1600 <= 0.02563";
  cert.checked_region = {};
  cert.requested_step = 0.0;
  cert.grid_step = 0.0;
  cert.lipschitz_constant = 0.0;
  cert.margin =
      static_cast<double>(rhs - lhs) / (1600.0 * 100000.0);  // 5e-6 exactly
  cert.holds = lhs <= rhs;
  cert.note = "exact integer comparison 41*100000 <= 2563*1600";
  return cert;
}

}  // namespace

std::vector<BoundCertificate> verify_bounds(double grid_step) {
  if (!(grid_step > 0.0) || grid_step > 1e-4)
    throw std::invalid_argument("verify_bounds: grid_step must be in (0, 1e-4]");
  const BConstants& k = constants();
  const double guard = 64.0 * grid_step;

  std::vector<BoundCertificate> certs;

  certs.push_back(grid_certificate(
      "C1", "Delta has no zero outside g-neighbourhoods of 0 and theta0",
      [](double t) { return std::abs(delta_fn(t)); },
      {{guard, k.theta0 - guard}, {k.theta0 + guard, kHalfPi}}, grid_step,
      k.lipschitz_delta));
  certs.back().note += (certs.back().note.empty() ? "" : "; ") +
                       std::string("guard g = 64 * grid_step");

  {
    BoundCertificate left = grid_certificate(
        "C2", "", [](double t) { return delta_deriv(t); },
        {{0.0, k.theta1 - guard}}, grid_step, k.lipschitz_delta_deriv);
    BoundCertificate right = grid_certificate(
        "C2", "", [](double t) { return -delta_deriv(t); },
        {{k.theta1 + guard, kHalfPi}}, grid_step, k.lipschitz_delta_deriv);
    BoundCertificate cert;
    cert.claim = "C2";
    cert.statement =
        "Delta' > 0 on [0, theta1-g], Delta' < 0 on [theta1+g, pi/2]";
    cert.checked_region = {{0.0, k.theta1 - guard},
                           {k.theta1 + guard, kHalfPi}};
    cert.requested_step = grid_step;
    cert.grid_step = std::max(left.grid_step, right.grid_step);
    if (left.grid_step > 0.0 && right.grid_step > 0.0)
      cert.grid_step = std::min(left.grid_step, right.grid_step);
    cert.lipschitz_constant = k.lipschitz_delta_deriv;
    cert.margin = std::min(left.margin, right.margin);
    cert.holds = left.holds && right.holds;
    cert.note = left.note.empty() ? right.note : left.note;
    certs.push_back(cert);
  }

  certs.push_back(grid_certificate(
      "C3",
      "{theta : |Delta(theta)| <= 0.02563} inside [0, 0.1057] u "
      "[0.578, 0.6952]",
      [&k](double t) { return std::abs(delta_fn(t)) - k.delta_big_bound; },
      {{k.modeI_hi, k.modeII_lo}, {k.modeII_hi, kHalfPi}}, grid_step,
      k.lipschitz_delta));

  certs.push_back(certificate_c4(grid_step));
  certs.push_back(certificate_c5());
  return certs;
}

}  // namespace acfeas::gadget
