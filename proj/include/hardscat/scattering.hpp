#pragma once
// The two linear scattering families for a pair of congruent convex bodies:
// the canonical family (impulse along the contact normal, a reflection in the
// kinetic metric) and the non-canonical family (reflection through the span of
// the conserved directions). Velocity layout V = [v, vbar, omega, omega_bar].

#include <cstdint>
#include <string>
#include <vector>

#include "hardscat/body.hpp"
#include "hardscat/core.hpp"
#include "hardscat/geometry.hpp"

namespace hardscat {

enum class Family { canonical, noncanonical };

inline const char* family_name(Family f) {
  return f == Family::canonical ? "canonical" : "noncanonical";
}

// conserved linear-momentum directions (1,0,1,0,0,0)/sqrt2, (0,1,0,1,0,0)/sqrt2
inline std::pair<Vec6, Vec6> e_hats() {
  Vec6 e1, e2;
  const double s = 1.0 / std::sqrt(2.0);
  e1 << s, 0, s, 0, 0, 0;
  e2 << 0, s, 0, s, 0, 0;
  return {e1, e2};
}

// third conserved direction of the non-canonical family
inline Vec6 e_beta(const MassInertia& mi, double d, double psi) {
  const double sm = std::sqrt(mi.m), sj = std::sqrt(mi.J);
  const double sn = std::sin(psi), cs = std::cos(psi);
  Vec6 e;
  e << sm * d * sn, -sm * d * cs, -sm * d * sn, sm * d * cs, 2 * sj, 2 * sj;
  return e / std::sqrt(2 * mi.m * d * d + 8 * mi.J);
}

// angular-momentum functional about the unbarred centre at contact:
// alpha . V = m d e_perp(psi) . vbar + J (omega + omega_bar)
inline Vec6 alpha_functional(const MassInertia& mi, double d, double psi) {
  const Vec2 ep = perp(dir(psi));
  Vec6 a;
  a << 0, 0, mi.m * d * ep.x(), mi.m * d * ep.y(), mi.J, mi.J;
  return a;
}

// mass-factor regression probe: same functional without the m weight on the
// translational block; conserved by the non-canonical family only when m == 1
inline Vec6 alpha_literal(const MassInertia& mi, double d, double psi) {
  const Vec2 ep = perp(dir(psi));
  Vec6 a;
  a << 0, 0, d * ep.x(), d * ep.y(), mi.J, mi.J;
  return a;
}

// sigma_x = M^-1 (2 E1 E1^T + 2 E2 E2^T + 2 E_beta E_beta^T - I) M
inline Mat6 sigma_noncanonical(const MassInertia& mi, double d, double psi) {
  const auto [e1, e2] = e_hats();
  const Vec6 eb = e_beta(mi, d, psi);
  const Mat6 B = 2.0 * (e1 * e1.transpose() + e2 * e2.transpose() + eb * eb.transpose()) -
                 Mat6::Identity();
  const Mat6 M = mass_matrix(mi);
  return M.inverse() * B * M;
}

inline Mat6 sigma_noncanonical(const ConvexBody2D& body, const MassInertia& mi,
                               const CollisionParam2D& beta) {
  return sigma_noncanonical(mi, docd(body, beta), beta.psi);
}

namespace detail {

// unnormalized gap-function gradient assembled from contact data:
//   grad F  ~  [-n, n, -(p_perp . n), (q_perp . n)]
inline Vec6 grad_gap_from_contact(const ContactData& c) {
  Vec6 g;
  g << -c.n.x(), -c.n.y(), c.n.x(), c.n.y(), -perp(c.p).dot(c.n), perp(c.q).dot(c.n);
  return g;
}

}  // namespace detail

// Euclidean unit normal to the zero level set of the gap function at the
// contact configuration, via finite differences of docd; sign: +grad F, so
// approaching velocities satisfy V . N <= 0
inline Vec6 unit_normal_N(const ConvexBody2D& body, const CollisionParam2D& beta) {
  const double d = docd(body, beta);
  const DocdPartials dp = docd_partials(body, beta);
  const Vec2 e = dir(beta.psi), ep = perp(e);
  const Vec2 gx = -2 * d * e + 2 * dp.d_psi * ep;
  Vec6 g;
  g << gx.x(), gx.y(), -gx.x(), -gx.y(), -2 * d * dp.d_theta, -2 * d * dp.d_theta_bar;
  return g.normalized();
}

// same normal from the contact-data chain rule (exact up to the contact solve)
inline Vec6 unit_normal_contact(const ConvexBody2D& body, const CollisionParam2D& beta) {
  return detail::grad_gap_from_contact(contact_data(body, beta)).normalized();
}

// sigma_* = M^-1 (I - 2 N N^T) M with N the unit normal in the kinetic metric
// (the M^-1-weighted gap gradient); this is the reflection that reproduces the
// elastic impulse formulas and conserves angular momentum for any m, J
inline Mat6 sigma_canonical(const MassInertia& mi, const ContactData& c) {
  Vec6 w = detail::grad_gap_from_contact(c);
  const double sm = std::sqrt(mi.m), sj = std::sqrt(mi.J);
  w.segment<4>(0) /= sm;
  w.segment<2>(4) /= sj;
  w.normalize();
  const Mat6 refl = Mat6::Identity() - 2.0 * w * w.transpose();
  const Mat6 M = mass_matrix(mi);
  return M.inverse() * refl * M;
}

inline Mat6 sigma_canonical(const ConvexBody2D& body, const MassInertia& mi,
                            const CollisionParam2D& beta) {
  return sigma_canonical(mi, contact_data(body, beta));
}

inline Mat6 sigma_family(Family f, const ConvexBody2D& body, const MassInertia& mi,
                         const CollisionParam2D& beta) {
  return f == Family::canonical ? sigma_canonical(body, mi, beta)
                                : sigma_noncanonical(body, mi, beta);
}

inline Vec6 apply(const Mat6& sigma, const Vec6& V) { return sigma * V; }

// element-wise canonical map: elastic impulse lambda = 2 g / Lam along n with
//   g   = (v + w p_perp - vbar - wbar q_perp) . n
//   Lam = 2/m + (p_perp . n)^2 / J + (q_perp . n)^2 / J
inline Vec6 elementwise_canonical(const MassInertia& mi, const ContactData& c, const Vec6& V) {
  const Vec2 pp = perp(c.p), qp = perp(c.q);
  const double g =
      (v_of(V) + om_of(V) * pp - vbar_of(V) - ombar_of(V) * qp).dot(c.n);
  const double lam = 2.0 / mi.m + pp.dot(c.n) * pp.dot(c.n) / mi.J +
                     qp.dot(c.n) * qp.dot(c.n) / mi.J;
  const double imp = 2.0 * g / lam;
  return pack_velocity(v_of(V) - (imp / mi.m) * c.n, vbar_of(V) + (imp / mi.m) * c.n,
                       om_of(V) - (imp / mi.J) * pp.dot(c.n),
                       ombar_of(V) + (imp / mi.J) * qp.dot(c.n));
}

// variant with the squared normalization, kept only for the comparison probe;
// disagrees with the reflection on non-circular bodies
inline Vec6 elementwise_canonical_squared_variant(const MassInertia& mi, const ContactData& c,
                                                  const Vec6& V) {
  const Vec2 pp = perp(c.p), qp = perp(c.q);
  const double g =
      (v_of(V) + om_of(V) * pp - vbar_of(V) - ombar_of(V) * qp).dot(c.n);
  const double lam = 2.0 / mi.m + pp.dot(c.n) * pp.dot(c.n) / mi.J +
                     qp.dot(c.n) * qp.dot(c.n) / mi.J;
  const double imp = g / (lam * lam);
  return pack_velocity(v_of(V) - (imp / mi.m) * c.n, vbar_of(V) + (imp / mi.m) * c.n,
                       om_of(V) - (imp / mi.J) * pp.dot(c.n),
                       ombar_of(V) + (imp / mi.J) * qp.dot(c.n));
}

// element-wise non-canonical map
inline Vec6 elementwise_noncanonical(const MassInertia& mi, double d, double psi, const Vec6& V) {
  const Vec2 ep = perp(dir(psi));
  const double md = mi.m * d;
  const Vec2 inner = md * v_of(V) - 2 * mi.J * om_of(V) * ep - md * vbar_of(V) -
                     2 * mi.J * ombar_of(V) * ep;
  const double s = inner.dot(ep) / (mi.m * d * d + 4 * mi.J);
  return pack_velocity(vbar_of(V) + s * d * ep, v_of(V) - s * d * ep, -om_of(V) - 2 * s,
                       -ombar_of(V) - 2 * s);
}

// residual diagnostics for a scattering matrix
inline double det_residual(const Mat6& S) { return std::abs(S.determinant() + 1.0); }

inline double involution_residual(const Mat6& S) {
  return (S * S - Mat6::Identity()).cwiseAbs().maxCoeff();
}

inline double kinetic_orthogonality_residual(const MassInertia& mi, const Mat6& S) {
  const Mat6 M = mass_matrix(mi);
  const Mat6 W = M * S * M.inverse();
  return (W.transpose() * W - Mat6::Identity()).cwiseAbs().maxCoeff();
}

struct VerificationTolerances {
  double det = 1e-9;
  double ehat = 1e-10;
  double alpha = 1e-9;
  double energy_rel = 1e-9;
  double halfspace = -1e-10;
};

struct VerificationReport {
  std::string family;
  std::string body_hash;
  std::string tool_version = kVersion;
  CollisionParam2D beta;
  int n_samples = 0;
  std::uint64_t seed = 0;
  double det_residual = 0;
  double e1_residual = 0;
  double e2_residual = 0;
  double alpha_residual = 0;
  double energy_rel_residual = 0;
  double halfspace_worst = 0;  // min of sigma V . N over pre-collisional samples
  int halfspace_checked = 0;
  int halfspace_violations = 0;
  std::vector<int> violated_samples;
  bool pass = false;
};

// Monte Carlo verification of the physical-scattering properties at one beta.
// The half-space certificate uses the contact chain-rule normal: both families
// flip the gap derivative exactly in that frame.
inline VerificationReport verify_physical(Family family, const ConvexBody2D& body,
                                          const MassInertia& mi, const CollisionParam2D& beta,
                                          int n_samples, std::uint64_t seed,
                                          const VerificationTolerances& tol = {}) {
  const ContactData c = contact_data(body, beta);
  const Mat6 S = family == Family::canonical ? sigma_canonical(mi, c)
                                             : sigma_noncanonical(mi, c.d, beta.psi);
  const auto [e1, e2] = e_hats();
  const Vec6 alpha = alpha_functional(mi, c.d, beta.psi);
  const Vec6 N = detail::grad_gap_from_contact(c).normalized();

  VerificationReport rep;
  rep.family = family_name(family);
  rep.body_hash = body.hash();
  rep.beta = beta;
  rep.n_samples = n_samples;
  rep.seed = seed;
  rep.det_residual = det_residual(S);
  rep.halfspace_worst = 1e300;

  for (int i = 0; i < n_samples; ++i) {
    auto g = derived_rng(seed, 17, i);
    const Vec6 V = sample_normal6(g);
    const Vec6 W = S * V;
    const double scale = 1.0 + V.norm();
    rep.e1_residual = std::max(rep.e1_residual, std::abs(W.dot(e1) - V.dot(e1)) / scale);
    rep.e2_residual = std::max(rep.e2_residual, std::abs(W.dot(e2) - V.dot(e2)) / scale);
    rep.alpha_residual = std::max(rep.alpha_residual, std::abs(W.dot(alpha) - V.dot(alpha)) / scale);
    const double ein = kinetic_form(mi, V);
    rep.energy_rel_residual =
        std::max(rep.energy_rel_residual, std::abs(kinetic_form(mi, W) - ein) / ein);
    if (V.dot(N) <= 0) {
      ++rep.halfspace_checked;
      const double out = W.dot(N);
      rep.halfspace_worst = std::min(rep.halfspace_worst, out);
      if (out < tol.halfspace) {
        ++rep.halfspace_violations;
        rep.violated_samples.push_back(i);
      }
    }
  }
  rep.pass = rep.det_residual <= tol.det && rep.e1_residual <= tol.ehat &&
             rep.e2_residual <= tol.ehat && rep.alpha_residual <= tol.alpha &&
             rep.energy_rel_residual <= tol.energy_rel && rep.halfspace_violations == 0;
  return rep;
}

}  // namespace hardscat
