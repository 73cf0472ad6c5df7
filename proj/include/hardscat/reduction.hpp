#pragma once
// Energy-momentum reduction for planar pairs: admissible (e, p) data, the
// parametrization H_P of the energy-momentum manifold by the unit 3-sphere,
// the 4-D and 3-D reflection data attached to a collision parameter, and the
// I*/Delta conjugation identity linking them.
//
// One wrinkle, confirmed by test_reduction: the action the non-canonical
// family induces on y-coordinates is the reflection 2 k k^T - I through the
// span of k_hat (it fixes k_hat and negates the complement), which is minus
// the hyperplane reflection s_beta = I - 2 k k^T. Both generate the same
// group once products of two reflections are taken, so downstream rank and
// invariance results are insensitive to the choice; the intertwining residual
// is only small for the axis form.

#include <stdexcept>
#include <utility>

#include "hardscat/core.hpp"
#include "hardscat/geometry.hpp"
#include "hardscat/scattering.hpp"

namespace hardscat {

// e^2 is the conserved kinetic form m|v|^2 + m|vbar|^2 + J w^2 + J wbar^2
struct EnergyMomentum2 {
  double e = 1;
  Vec2 p = Vec2::Zero();
  MassInertia mi;

  bool admissible() const { return e > 0 && 2 * mi.m * e * e > p.squaredNorm(); }
};

using ReducedVector4 = Vec4;

struct ReductionConstants {
  Eigen::Matrix<double, 3, 4> I_star;
  Mat3 Delta;
};

inline ReductionConstants reduction_constants() {
  ReductionConstants rc;
  rc.I_star << 1, 0, 0, 0,
               0, 1, 0, 0,
               0, 0, 1, 1;
  rc.Delta = Vec3{1, 1, 1 / std::sqrt(2.0)}.asDiagonal();
  return rc;
}

// norm and momentum identities hold on |y| = 1; the formula is linear in y
inline Vec6 H_P(const EnergyMomentum2& em, const Vec4& y) {
  if (!em.admissible()) throw std::domain_error("H_P: inadmissible energy-momentum pair");
  if (y.norm() == 0.0) throw std::invalid_argument("H_P: y must be nonzero");
  const double m = em.mi.m;
  const double kappa = std::sqrt(2 * m * em.e * em.e - em.p.squaredNorm());
  const double wa = kappa / std::sqrt(2 * m * em.mi.J);
  Vec6 out;
  out << (em.p.x() + kappa * y[0]) / (2 * m), (em.p.y() + kappa * y[1]) / (2 * m),
      (em.p.x() - kappa * y[0]) / (2 * m), (em.p.y() - kappa * y[1]) / (2 * m),
      wa * y[2], wa * y[3];
  return out;
}

// inverse chart: (e, p, y) with |y| = 1 from a velocity state off the
// momentum-only set (kappa > 0)
inline std::pair<EnergyMomentum2, Vec4> reduced_coordinates(const MassInertia& mi, const Vec6& V) {
  EnergyMomentum2 em;
  em.mi = mi;
  const double e2 = kinetic_form(mi, V);
  em.e = std::sqrt(e2);
  em.p = mi.m * Vec2{V[0] + V[2], V[1] + V[3]};
  const double kappa2 = 2 * mi.m * e2 - em.p.squaredNorm();
  if (kappa2 <= 0) throw std::domain_error("reduced_coordinates: state has no sphere coordinate");
  const double kappa = std::sqrt(kappa2);
  Vec4 y;
  y << mi.m * (V[0] - V[2]) / kappa, mi.m * (V[1] - V[3]) / kappa,
      std::sqrt(2 * mi.m * mi.J) * V[4] / kappa, std::sqrt(2 * mi.m * mi.J) * V[5] / kappa;
  return {em, y};
}

inline Vec4 k_hat_from(const MassInertia& mi, double d, double psi) {
  const double norm = std::sqrt(mi.m * d * d + 4 * mi.J);
  return Vec4{-std::sqrt(mi.m) * d * std::sin(psi), std::sqrt(mi.m) * d * std::cos(psi),
              -std::sqrt(2 * mi.J), -std::sqrt(2 * mi.J)} /
         norm;
}

struct Reflection4 {
  Vec4 k;
  Mat4 s_beta;  // I - 2 k (x) k
};

inline Reflection4 k_hat(const MassInertia& mi, const ConvexBody2D& body,
                         const CollisionParam2D& beta) {
  Reflection4 out;
  out.k = k_hat_from(mi, docd(body, beta), beta.psi);
  out.s_beta = Mat4::Identity() - 2 * out.k * out.k.transpose();
  return out;
}

inline Vec3 gamma_hat_from(const MassInertia& mi, double d, double psi) {
  const double norm = std::sqrt(mi.m * d * d + 4 * mi.J);
  return Vec3{-std::sqrt(mi.m) * d * std::sin(psi), std::sqrt(mi.m) * d * std::cos(psi),
              -2 * std::sqrt(mi.J)} /
         norm;
}

struct Reflection3 {
  Vec3 g;
  Mat3 r_beta;  // I - 2 g (x) g
};

inline Reflection3 gamma_hat(const MassInertia& mi, const ConvexBody2D& body,
                             const CollisionParam2D& beta) {
  Reflection3 out;
  out.g = gamma_hat_from(mi, docd(body, beta), beta.psi);
  out.r_beta = Mat3::Identity() - 2 * out.g * out.g.transpose();
  return out;
}

// the y-space reflection actually transported by the non-canonical family
inline Mat4 transported_reflection(const Vec4& k) {
  return 2 * k * k.transpose() - Mat4::Identity();
}

// || sigma_x H_P(e,p,y) - H_P(e,p, (2 k k^T - I) y) ||
inline double intertwine_2d(const ConvexBody2D& body, const EnergyMomentum2& em, const Vec4& y,
                            const CollisionParam2D& beta) {
  const double d = docd(body, beta);
  const Vec4 k = k_hat_from(em.mi, d, beta.psi);
  const Vec4 ry = 2 * k.dot(y) * k - y;
  return (sigma_noncanonical(em.mi, d, beta.psi) * H_P(em, y) - H_P(em, ry)).norm();
}

// Frobenius norm of I* s_beta - Delta^-1 r_beta Delta I*; exactly zero in
// theory, so residuals are pure rounding
inline double conjugation_identity(const MassInertia& mi, const ConvexBody2D& body,
                                   const CollisionParam2D& beta) {
  const ReductionConstants rc = reduction_constants();
  const Reflection4 four = k_hat(mi, body, beta);
  const Reflection3 three = gamma_hat(mi, body, beta);
  const Eigen::Matrix<double, 3, 4> lhs = rc.I_star * four.s_beta;
  const Eigen::Matrix<double, 3, 4> rhs =
      rc.Delta.inverse() * three.r_beta * rc.Delta * rc.I_star;
  return (lhs - rhs).norm();
}

}  // namespace hardscat
