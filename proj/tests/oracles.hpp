#pragma once
// Test-only oracles, kept independent of the library's minimization path:
//  - exact touching distance for polygons via Minkowski-difference edge normals
//  - GJK boolean separation on support maps, and a bisection docd built on it
//  - Richardson-extrapolated finite differences
//  - random valid body generators

#include <functional>
#include <random>
#include <vector>

#include "hardscat/body.hpp"
#include "hardscat/geometry.hpp"

namespace hardscat::oracle {

// The chart objective t -> h_K(e + t e_perp) of a polygon pair is piecewise
// linear with breakpoints exactly at edge normals of K = A + (-B), so the
// minimum of the support ratio over those finitely many directions is exact.
inline double polygon_docd(const Polygon& poly, const CollisionParam2D& beta) {
  const ConvexBody2D body{poly};
  const Vec2 e = dir(beta.psi);
  std::vector<Vec2> normals;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 edge = v[(i + 1) % v.size()] - v[i];
    const Vec2 n = Vec2(edge.y(), -edge.x()).normalized();  // outward for ccw
    normals.push_back(rot(beta.theta) * n);                 // edges of A
    normals.push_back(-(rot(beta.theta_bar) * n));          // edges of -B
  }
  double best = 1e300;
  for (const Vec2& u : normals) {
    const double ue = u.dot(e);
    if (ue < 1e-12) continue;
    const double h = detail::rotated_support(body, beta.theta, u).h +
                     detail::rotated_support(body, beta.theta_bar, -u).h;
    best = std::min(best, h / ue);
  }
  return best;
}

// boolean GJK: does the set with the given support map contain the origin?
inline bool gjk_contains_origin(const std::function<Vec2(const Vec2&)>& support) {
  auto triple = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return b * a.dot(c) - a * b.dot(c);  // (a x b) x c
  };
  Vec2 d{1, 0};
  std::vector<Vec2> sx{support(d)};
  if (sx[0].dot(d) < 0) return false;
  d = -sx[0];
  for (int iter = 0; iter < 128; ++iter) {
    if (d.norm() < 1e-14) return true;  // origin sits on the simplex
    const Vec2 p = support(d.normalized());
    if (p.dot(d.normalized()) < 1e-13) return false;  // no support past the origin
    sx.push_back(p);
    if (sx.size() == 2) {
      const Vec2 A = sx[1], B = sx[0];
      const Vec2 AB = B - A, AO = -A;
      if (AB.dot(AO) > 0) {
        d = triple(AB, AO, AB);
      } else {
        sx = {A};
        d = AO;
      }
    } else {
      const Vec2 C = sx[0], B = sx[1], A = sx[2];
      const Vec2 AB = B - A, AC = C - A, AO = -A;
      const Vec2 abPerp = triple(AC, AB, AB);
      const Vec2 acPerp = triple(AB, AC, AC);
      if (abPerp.dot(AO) > 0) {
        sx = {B, A};
        d = abPerp;
      } else if (acPerp.dot(AO) > 0) {
        sx = {C, A};
        d = acPerp;
      } else {
        return true;
      }
    }
  }
  return true;  // stalled at a touching configuration; count as not separated
}

// are the two copies separated when the barred copy sits at distance t e(psi)?
inline bool separated_at(const ConvexBody2D& body, const CollisionParam2D& beta, double t) {
  const Vec2 shift = t * dir(beta.psi);
  auto support = [&](const Vec2& u) {
    return detail::rotated_support(body, beta.theta, u).point -
           detail::rotated_support(body, beta.theta_bar, -u).point - shift;
  };
  return !gjk_contains_origin(support);
}

// bisection on the separation boolean; independent of the grid minimizer
inline double bisection_docd(const ConvexBody2D& body, const CollisionParam2D& beta) {
  double lo = 0.0;
  double hi = 4.0 * body.max_radius() + 1.0;
  for (int i = 0; i < 64; ++i) {
    const double mid = 0.5 * (lo + hi);
    (separated_at(body, beta, mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Richardson extrapolation of a central difference, steps h and h/2
inline double richardson_diff(const std::function<double(double)>& f, double x, double h) {
  auto central = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
  return (4 * central(0.5 * h) - central(h)) / 3.0;
}

inline SupportFourier random_support_fourier(std::mt19937_64& g, int kmax = 6,
                                             double margin = 0.25) {
  std::normal_distribution<double> N(0.0, 1.0);
  SupportFourier f;
  f.cos_c.assign(kmax + 1, 0.0);
  f.sin_c.assign(kmax, 0.0);
  f.cos_c[0] = 1.0;
  double budget = 0.0;
  for (int k = 2; k <= kmax; ++k) {
    f.cos_c[k] = 0.3 * N(g) / (k * k);
    f.sin_c[k - 1] = 0.3 * N(g) / (k * k);
    budget += (1.0 + k * k) * (std::abs(f.cos_c[k]) + std::abs(f.sin_c[k - 1]));
  }
  if (budget > 1.0 - margin) {
    const double s = (1.0 - margin) / budget;
    for (int k = 2; k <= kmax; ++k) {
      f.cos_c[k] *= s;
      f.sin_c[k - 1] *= s;
    }
  }
  return f;
}

// convex polygon from angle-sorted random edge vectors, recentred on centroid
inline Polygon random_polygon(std::mt19937_64& g, int n = 7) {
  std::normal_distribution<double> N(0.0, 1.0);
  for (;;) {
    std::vector<Vec2> edges(n);
    Vec2 sum{0, 0};
    for (auto& e : edges) {
      e = {N(g), N(g)};
      sum += e;
    }
    for (auto& e : edges) e -= sum / n;
    std::sort(edges.begin(), edges.end(),
              [](const Vec2& a, const Vec2& b) { return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x()); });
    std::vector<Vec2> v(n);
    Vec2 acc{0, 0};
    for (int i = 0; i < n; ++i) {
      v[i] = acc;
      acc += edges[i];
    }
    double A = 0;
    Vec2 c{0, 0};
    bool strict = true;
    for (int i = 0; i < n; ++i) {
      const Vec2 a = v[i], b = v[(i + 1) % n], d2 = v[(i + 2) % n];
      if (detail::polygon_cross(b - a, d2 - b) < 1e-6) strict = false;
      const double cr = detail::polygon_cross(a, b);
      A += 0.5 * cr;
      c += cr * (a + b) / 6.0;
    }
    if (!strict || A < 0.3) continue;
    c /= A;
    for (auto& x : v) x -= c;
    return Polygon{v};
  }
}

}  // namespace hardscat::oracle
