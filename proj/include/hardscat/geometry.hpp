#pragma once
// Touching distance between two congruent rotated copies of a convex body,
// contact data at touching, and the gap function on configuration space.
//
// The touching distance along direction e(psi) is the radial function of the
// Minkowski difference K = R(theta)P + (-R(theta_bar)P):
//   d(psi, theta, theta_bar) = min_{u . e > 0} (h_A(u) + h_B(-u)) / (u . e)
// The ratio is convex in the chart u = e + t e_perp (it equals h_K(e + t e_perp)
// there), hence unimodal in the direction angle over the open half-circle.

#include <stdexcept>

#include "hardscat/body.hpp"
#include "hardscat/core.hpp"

namespace hardscat {

inline constexpr int kDocdGrid = 1024;
inline constexpr double kDocdAngleTol = 1e-10;

struct ContactData {
  Vec2 n;    // contact normal (unit, from the unbarred body into the gap)
  Vec2 p;    // contact point relative to the unbarred centre
  Vec2 q;    // contact point relative to the barred centre, q = p - d e(psi)
  double d;  // touching distance
};

struct DocdPartials {
  double d_psi;
  double d_theta;
  double d_theta_bar;
};

namespace detail {

// support of the rotated copy R(th) P in unit direction u
inline SupportEval rotated_support(const ConvexBody2D& body, double th, const Vec2& u) {
  SupportEval e = body.support(rot(-th) * u);
  e.point = rot(th) * e.point;
  return e;
}

struct DocdObjective {
  const ConvexBody2D& body;
  CollisionParam2D beta;

  double operator()(double gamma) const {
    const Vec2 u = dir(gamma);
    const double h = rotated_support(body, beta.theta, u).h +
                     rotated_support(body, beta.theta_bar, -u).h;
    return h / std::cos(gamma - beta.psi);
  }
};

// golden-section minimum of a unimodal function, interval refined to tol
template <class F>
double golden_min(const F& f, double a, double b, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Derivative of the ratio numerator for smooth bodies. With
// H(g) = h_P(g - theta) + h_P(g + pi - theta_bar) the stationarity condition
// for H(g)/cos(g - psi) reads H'(g) cos(g - psi) + H(g) sin(g - psi) = 0.
// Root-finding this localizes the minimizer to machine precision, where a
// value-only search stalls on the ~sqrt(eps) quadratic plateau.
struct DocdStationarity {
  const ConvexBody2D& body;
  CollisionParam2D beta;

  double operator()(double gamma) const {
    const SupportAngleEval a = body.support_angle(gamma - beta.theta);
    const SupportAngleEval b = body.support_angle(gamma + kPi - beta.theta_bar);
    const double c = gamma - beta.psi;
    return (a.dh + b.dh) * std::cos(c) + (a.h + b.h) * std::sin(c);
  }
};

// grid seed over the open half-circle, then refinement: derivative bisection
// for smooth bodies, golden-section for polygons
inline double docd_minimizer(const ConvexBody2D& body, const CollisionParam2D& beta) {
  const DocdObjective f{body, beta};
  const double lo = beta.psi - 0.5 * kPi, span = kPi;
  int best = 0;
  double fbest = 1e300;
  for (int i = 0; i < kDocdGrid; ++i) {
    const double g = lo + span * (i + 0.5) / kDocdGrid;
    const double v = f(g);
    if (v < fbest) {
      fbest = v;
      best = i;
    }
  }
  double a = std::max(lo + span * (best - 0.5) / kDocdGrid, lo + 1e-9);
  double b = std::min(lo + span * (best + 1.5) / kDocdGrid, lo + span - 1e-9);
  if (!body.is_smooth()) return golden_min(f, a, b, kDocdAngleTol);

  const DocdStationarity g{body, beta};
  double ga = g(a), gb = g(b);
  // the grid bracket should straddle the stationary point; widen once if not
  const double cell = span / kDocdGrid;
  if (ga > 0 && a - cell > lo) {
    a -= cell;
    ga = g(a);
  }
  if (gb < 0 && b + cell < lo + span) {
    b += cell;
    gb = g(b);
  }
  if (ga > 0 || gb < 0) return golden_min(f, a, b, kDocdAngleTol);
  for (int i = 0; i < 64 && b - a > 1e-15; ++i) {
    const double mid = 0.5 * (a + b);
    const double gm = g(mid);
    if (gm <= 0) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
      gb = gm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

inline double docd(const ConvexBody2D& body, const CollisionParam2D& beta) {
  return detail::DocdObjective{body, beta}(detail::docd_minimizer(body, beta));
}

inline ContactData contact_data(const ConvexBody2D& body, const CollisionParam2D& beta) {
  const double g = detail::docd_minimizer(body, beta);
  const Vec2 n = dir(g);
  const double d = detail::DocdObjective{body, beta}(g);
  const Vec2 p = detail::rotated_support(body, beta.theta, n).point;
  return {n, p, p - d * dir(beta.psi), d};
}

// central differences of docd; smooth support functions only
inline DocdPartials docd_partials(const ConvexBody2D& body, const CollisionParam2D& beta,
                                  double step = 1e-5) {
  if (body.is_polygon())
    throw std::invalid_argument("docd_partials: polygon support is not differentiable");
  auto shift = [&](double dpsi, double dth, double dthb) {
    CollisionParam2D b = beta;
    b.psi += dpsi;
    b.theta += dth;
    b.theta_bar += dthb;
    return docd(body, b);
  };
  const double inv = 1.0 / (2 * step);
  return {(shift(step, 0, 0) - shift(-step, 0, 0)) * inv,
          (shift(0, step, 0) - shift(0, -step, 0)) * inv,
          (shift(0, 0, step) - shift(0, 0, -step)) * inv};
}

// configuration Y = [x, xbar, theta, theta_bar]
inline double psi_of(const Vec6& Y) { return std::atan2(Y[3] - Y[1], Y[2] - Y[0]); }

// F(Y) = |x - xbar|^2 - d(psi(Y), theta, theta_bar)^2
inline double gap_function(const ConvexBody2D& body, const Vec6& Y) {
  const double d = docd(body, {psi_of(Y), Y[4], Y[5]});
  const double dx = Y[0] - Y[2], dy = Y[1] - Y[3];
  return dx * dx + dy * dy - d * d;
}

}  // namespace hardscat
