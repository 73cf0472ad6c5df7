#pragma once
// Convex body descriptors (disk / convex polygon / support-function Fourier
// series), their support maps, and uniform-density mass properties.

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hardscat/core.hpp"

namespace hardscat {

struct Disk {
  double r = 1.0;
};

// counterclockwise, strictly convex, centroid at the origin
struct Polygon {
  std::vector<Vec2> vertices;
};

// h(phi) = cos_c[0] + sum_k cos_c[k] cos(k phi) + sin_c[k-1] sin(k phi)
struct SupportFourier {
  std::vector<double> cos_c;  // cos_c[0] is the constant term
  std::vector<double> sin_c;  // sin_c[k-1] multiplies sin(k phi)
};

inline constexpr int kConvexityGrid = 4096;

struct SupportEval {
  double h;    // support value in the query direction
  Vec2 point;  // attaining boundary point
};

struct SupportAngleEval {
  double h;   // support value at direction angle phi
  double dh;  // d/dphi of the support value
};

namespace detail {

inline void fourier_h(const SupportFourier& f, double phi, double& h, double& dh,
                      double& ddh) {
  h = f.cos_c.empty() ? 0.0 : f.cos_c[0];
  dh = 0.0;
  ddh = 0.0;
  const std::size_t kmax = std::max(f.cos_c.empty() ? 0 : f.cos_c.size() - 1, f.sin_c.size());
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double c = k < f.cos_c.size() ? f.cos_c[k] : 0.0;
    const double s = k <= f.sin_c.size() ? f.sin_c[k - 1] : 0.0;
    const double ck = std::cos(k * phi), sk = std::sin(k * phi);
    h += c * ck + s * sk;
    dh += k * (-c * sk + s * ck);
    ddh += -double(k) * double(k) * (c * ck + s * sk);
  }
}

inline double polygon_cross(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace detail

class ConvexBody2D {
 public:
  using Shape = std::variant<Disk, Polygon, SupportFourier>;

  explicit ConvexBody2D(Shape shape) : shape_(std::move(shape)) { validate(); }

  const Shape& shape() const { return shape_; }
  bool is_disk() const { return std::holds_alternative<Disk>(shape_); }
  bool is_polygon() const { return std::holds_alternative<Polygon>(shape_); }
  bool is_smooth() const { return !is_polygon(); }

  // support value and attaining point for a unit direction u
  SupportEval support(const Vec2& u) const {
    if (auto* d = std::get_if<Disk>(&shape_)) return {d->r, d->r * u};
    if (auto* p = std::get_if<Polygon>(&shape_)) {
      double best = -1e300;
      Vec2 arg = p->vertices.front();
      for (const Vec2& v : p->vertices) {
        const double s = v.dot(u);
        if (s > best) {
          best = s;
          arg = v;
        }
      }
      return {best, arg};
    }
    const auto& f = std::get<SupportFourier>(shape_);
    const double phi = std::atan2(u.y(), u.x());
    double h, dh, ddh;
    detail::fourier_h(f, phi, h, dh, ddh);
    // boundary point of a smooth support function: h e + h' e_perp
    return {h, h * dir(phi) + dh * perp(dir(phi))};
  }

  // support value and angular derivative at direction angle phi (smooth bodies)
  SupportAngleEval support_angle(double phi) const {
    if (auto* d = std::get_if<Disk>(&shape_)) return {d->r, 0.0};
    if (std::holds_alternative<Polygon>(shape_))
      throw std::invalid_argument("support_angle: polygon support is not differentiable");
    const auto& f = std::get<SupportFourier>(shape_);
    double h, dh, ddh;
    detail::fourier_h(f, phi, h, dh, ddh);
    return {h, dh};
  }

  // outer radius bound (used for flight-step control and hashing scale)
  double max_radius() const {
    if (auto* d = std::get_if<Disk>(&shape_)) return d->r;
    if (auto* p = std::get_if<Polygon>(&shape_)) {
      double r = 0;
      for (const Vec2& v : p->vertices) r = std::max(r, v.norm());
      return r;
    }
    double r = 0;
    for (int i = 0; i < kConvexityGrid; ++i)
      r = std::max(r, support(dir(2 * kPi * i / kConvexityGrid)).point.norm());
    return r;
  }

  // uniform unit density mass and second moment about the origin
  MassInertia mass_inertia() const {
    if (auto* d = std::get_if<Disk>(&shape_)) {
      const double r = d->r;
      return {kPi * r * r, 0.5 * kPi * r * r * r * r};
    }
    if (auto* p = std::get_if<Polygon>(&shape_)) {
      double A = 0, J = 0;
      const auto& v = p->vertices;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % v.size()];
        const double cr = detail::polygon_cross(a, b);
        A += 0.5 * cr;
        J += cr * (a.squaredNorm() + a.dot(b) + b.squaredNorm()) / 12.0;
      }
      return {A, J};
    }
    // Green's theorem on the support parametrization:
    //   dA = 1/2 h (h + h'') dphi,   d(second moment) = 1/4 (h^2 + h'^2) h (h + h'') dphi
    const auto& f = std::get<SupportFourier>(shape_);
    double A = 0, J = 0;
    const int n = kConvexityGrid;
    for (int i = 0; i < n; ++i) {
      double h, dh, ddh;
      detail::fourier_h(f, 2 * kPi * i / n, h, dh, ddh);
      const double w = h * (h + ddh);
      A += 0.5 * w;
      J += 0.25 * (h * h + dh * dh) * w;
    }
    return {A * 2 * kPi / n, J * 2 * kPi / n};
  }

  // stable descriptor string; doubles at 17 significant digits
  std::string canonical_descriptor() const {
    char buf[64];
    auto num = [&](double x) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      return std::string(buf);
    };
    if (auto* d = std::get_if<Disk>(&shape_)) return "disk:" + num(d->r);
    if (auto* p = std::get_if<Polygon>(&shape_)) {
      std::string s = "polygon:";
      for (const Vec2& v : p->vertices) s += num(v.x()) + "," + num(v.y()) + ";";
      return s;
    }
    const auto& f = std::get<SupportFourier>(shape_);
    std::string s = "support_fourier:cos=";
    for (double c : f.cos_c) s += num(c) + ",";
    s += "sin=";
    for (double c : f.sin_c) s += num(c) + ",";
    return s;
  }

  std::string hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : canonical_descriptor()) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

 private:
  void validate() const {
    if (auto* d = std::get_if<Disk>(&shape_)) {
      if (!(d->r > 0)) throw std::invalid_argument("disk radius must be positive");
      return;
    }
    if (auto* p = std::get_if<Polygon>(&shape_)) {
      const auto& v = p->vertices;
      if (v.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
      double A = 0;
      Vec2 c{0, 0};
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % v.size()];
        const Vec2& d2 = v[(i + 2) % v.size()];
        if (detail::polygon_cross(b - a, d2 - b) <= 0)
          throw std::invalid_argument("polygon must be counterclockwise and strictly convex");
        const double cr = detail::polygon_cross(a, b);
        A += 0.5 * cr;
        c += cr * (a + b) / 6.0;
      }
      if (!(A > 0)) throw std::invalid_argument("polygon must have positive area");
      if ((c / A).norm() > 1e-9)
        throw std::invalid_argument("polygon centroid must lie at the origin");
      return;
    }
    const auto& f = std::get<SupportFourier>(shape_);
    if (f.cos_c.empty()) throw std::invalid_argument("support_fourier needs a constant term");
    for (int i = 0; i < kConvexityGrid; ++i) {
      double h, dh, ddh;
      detail::fourier_h(f, 2 * kPi * i / kConvexityGrid, h, dh, ddh);
      if (!(h > 0)) throw std::invalid_argument("support function must be positive");
      if (!(h + ddh > 0))
        throw std::invalid_argument("support function must have positive curvature (h + h'' > 0)");
    }
  }

  Shape shape_;
};

}  // namespace hardscat
