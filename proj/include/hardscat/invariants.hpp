#pragma once
// Collision-invariant machinery: a finite candidate basis (Fourier in the
// orientation, quadratic monomials in the velocities, optional products), the
// pairwise residual of the invariance identity, and a rank-revealing
// nullspace solver that recovers the invariant space dimension by sampling.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/SVD>

#include "hardscat/core.hpp"
#include "hardscat/reduction.hpp"
#include "hardscat/scattering.hpp"

namespace hardscat {

struct BasisSpec {
  int fourier_order = 1;  // K: orientation terms 1, cos k.theta, sin k.theta, k <= K
  bool cross_terms = false;

  static constexpr int kMonomials = 9;  // v1 v2 w v1^2 v2^2 w^2 v1v2 v1w v2w
  int fourier_count() const { return 2 * fourier_order + 1; }
  int size() const {
    return fourier_count() + kMonomials + (cross_terms ? (fourier_count() - 1) * kMonomials : 0);
  }
};

// basis values at a single-particle state, in enumeration order: Fourier
// block, monomial block, then (nonconstant Fourier) x (monomial) products
inline Eigen::VectorXd basis_values(const BasisSpec& spec, const Vec2& v, double om,
                                    double theta) {
  Eigen::VectorXd out(spec.size());
  const int fc = spec.fourier_count();
  out[0] = 1.0;
  for (int k = 1; k <= spec.fourier_order; ++k) {
    out[2 * k - 1] = std::cos(k * theta);
    out[2 * k] = std::sin(k * theta);
  }
  const double mono[BasisSpec::kMonomials] = {v.x(),        v.y(),       om,
                                              v.x() * v.x(), v.y() * v.y(), om * om,
                                              v.x() * v.y(), v.x() * om,  v.y() * om};
  for (int j = 0; j < BasisSpec::kMonomials; ++j) out[fc + j] = mono[j];
  if (spec.cross_terms) {
    int at = fc + BasisSpec::kMonomials;
    for (int i = 1; i < fc; ++i)
      for (int j = 0; j < BasisSpec::kMonomials; ++j) out[at++] = out[i] * mono[j];
  }
  return out;
}

struct CandidateInvariant {
  BasisSpec spec;
  Eigen::VectorXd coefficients;

  double operator()(const Vec2& v, double om, double theta) const {
    return coefficients.dot(basis_values(spec, v, om, theta));
  }
};

// phi(v', w', th) + phi(vbar', wbar', thbar) - phi(v, w, th) - phi(vbar, wbar, thbar),
// grouped per particle so identical evaluations cancel exactly
inline double invariant_residual(const CandidateInvariant& phi, Family family,
                                 const MassInertia& mi, const ConvexBody2D& body, const Vec6& V,
                                 const CollisionParam2D& beta) {
  const Vec6 Vp = sigma_family(family, body, mi, beta) * V;
  return (phi(v_of(Vp), om_of(Vp), beta.theta) - phi(v_of(V), om_of(V), beta.theta)) +
         (phi(vbar_of(Vp), ombar_of(Vp), beta.theta_bar) -
          phi(vbar_of(V), ombar_of(V), beta.theta_bar));
}

// a(theta) + b.v + c (m|v|^2 + J w^2) written in basis coordinates
inline CandidateInvariant characterized_family(const MassInertia& mi,
                                               const Eigen::VectorXd& a_coeffs, const Vec2& b,
                                               double c, BasisSpec spec = {}) {
  if (a_coeffs.size() > spec.fourier_count())
    spec.fourier_order = static_cast<int>(a_coeffs.size()) / 2;
  CandidateInvariant phi;
  phi.spec = spec;
  phi.coefficients = Eigen::VectorXd::Zero(spec.size());
  phi.coefficients.head(a_coeffs.size()) = a_coeffs;
  const int fc = spec.fourier_count();
  phi.coefficients[fc + 0] = b.x();
  phi.coefficients[fc + 1] = b.y();
  phi.coefficients[fc + 3] = c * mi.m;
  phi.coefficients[fc + 4] = c * mi.m;
  phi.coefficients[fc + 5] = c * mi.J;
  return phi;
}

struct NullspaceResult {
  int dimension = 0;
  Eigen::MatrixXd basis_coefficients;  // one kernel element per column, original basis
  std::vector<double> singular_values;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  Family family = Family::noncanonical;
  BasisSpec spec;
  double threshold = 1e-8;
  double gap = 0;  // smallest non-kernel singular value over largest kernel one
  bool inconclusive = false;
  std::vector<double> validation_residuals;  // fresh-sample, relative to value scale
};

namespace detail {

struct KernelExtraction {
  Eigen::MatrixXd kernel;
  std::vector<double> singular_values;
  int dimension = 0;
  double gap = 0;
  bool inconclusive = false;
};

inline KernelExtraction extract_kernel(const Eigen::MatrixXd& rows, double threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeThinV);
  KernelExtraction out;
  const auto& sv = svd.singularValues();
  for (int i = 0; i < sv.size(); ++i) out.singular_values.push_back(sv[i]);
  const double cut = threshold * (sv.size() ? sv[0] : 0.0);
  int keep = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) keep = i + 1;
  out.dimension = static_cast<int>(sv.size()) - keep;
  out.kernel = svd.matrixV().rightCols(out.dimension);
  if (out.dimension == 0) {
    out.gap = 0;  // nothing below the cut; conditioning question does not arise
    out.inconclusive = false;
  } else {
    const double below = sv[keep];  // largest kernel singular value
    out.gap = below > 0 ? sv[keep - 1] / below : 1e300;
    out.inconclusive = out.gap < 10.0;
  }
  return out;
}

}  // namespace detail

// sampled functional-equation kernel over the candidate basis
inline NullspaceResult nullspace_solve(Family family, const MassInertia& mi,
                                       const ConvexBody2D& body, const BasisSpec& spec,
                                       int n_samples, std::uint64_t seed,
                                       int n_validation = 10000) {
  const int B = spec.size();
  if (n_samples < 10 * B)
    throw std::invalid_argument("nullspace_solve: need at least 10 samples per basis function");

  Eigen::MatrixXd rows(n_samples, B);
  Eigen::VectorXd second_moment = Eigen::VectorXd::Zero(B);
  std::uniform_real_distribution<double> ua(0, 2 * kPi);
  for (int i = 0; i < n_samples; ++i) {
    auto g = derived_rng(seed, 29, static_cast<std::uint64_t>(i));
    const Vec6 V = sample_normal6(g);
    const CollisionParam2D beta{ua(g), ua(g), ua(g)};
    const Vec6 Vp = sigma_family(family, body, mi, beta) * V;
    const Eigen::VectorXd pre1 = basis_values(spec, v_of(V), om_of(V), beta.theta);
    const Eigen::VectorXd pre2 = basis_values(spec, vbar_of(V), ombar_of(V), beta.theta_bar);
    rows.row(i) = ((basis_values(spec, v_of(Vp), om_of(Vp), beta.theta) - pre1) +
                   (basis_values(spec, vbar_of(Vp), ombar_of(Vp), beta.theta_bar) - pre2))
                      .transpose();
    second_moment += pre1.cwiseAbs2() + pre2.cwiseAbs2();
  }
  // equilibrate columns to unit empirical second moment of the basis values
  const Eigen::VectorXd scale = (second_moment / (2.0 * n_samples)).cwiseSqrt();
  rows = rows * scale.cwiseInverse().asDiagonal();

  const detail::KernelExtraction ext = detail::extract_kernel(rows, 1e-8);

  NullspaceResult res;
  res.dimension = ext.dimension;
  res.singular_values = ext.singular_values;
  res.sample_count = static_cast<std::size_t>(n_samples);
  res.seed = seed;
  res.family = family;
  res.spec = spec;
  res.gap = ext.gap;
  res.inconclusive = ext.inconclusive;
  res.basis_coefficients = scale.cwiseInverse().asDiagonal() * ext.kernel;
  for (int c = 0; c < res.basis_coefficients.cols(); ++c)
    res.basis_coefficients.col(c).normalize();

  // second, independent draw; residuals relative to the scale of phi values
  const int dim = static_cast<int>(res.basis_coefficients.cols());
  Eigen::VectorXd worst = Eigen::VectorXd::Zero(dim), value2 = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < n_validation; ++i) {
    auto g = derived_rng(seed, 31, static_cast<std::uint64_t>(i));
    const Vec6 V = sample_normal6(g);
    const CollisionParam2D beta{ua(g), ua(g), ua(g)};
    const Vec6 Vp = sigma_family(family, body, mi, beta) * V;
    const Eigen::VectorXd pre1 = basis_values(spec, v_of(V), om_of(V), beta.theta);
    const Eigen::VectorXd pre2 = basis_values(spec, vbar_of(V), ombar_of(V), beta.theta_bar);
    const Eigen::VectorXd row = (basis_values(spec, v_of(Vp), om_of(Vp), beta.theta) - pre1) +
                                (basis_values(spec, vbar_of(Vp), ombar_of(Vp), beta.theta_bar) - pre2);
    for (int c = 0; c < dim; ++c) {
      const auto coef = res.basis_coefficients.col(c);
      worst[c] = std::max(worst[c], std::abs(coef.dot(row)));
      value2[c] += std::pow(coef.dot(pre1), 2) + std::pow(coef.dot(pre2), 2);
    }
  }
  for (int c = 0; c < dim; ++c) {
    const double value_scale = std::sqrt(value2[c] / (2.0 * n_validation));
    res.validation_residuals.push_back(worst[c] / std::max(value_scale, 1e-30));
  }
  return res;
}

// hard-sphere analogue: all monomials of degree <= 2 in v, kernel expected to
// be span{1, v1, v2, v3, |v|^2}
inline constexpr int kSphereBasis = 10;

inline Eigen::VectorXd sphere_basis_values(const Vec3& v) {
  Eigen::VectorXd out(kSphereBasis);
  out << 1.0, v.x(), v.y(), v.z(), v.x() * v.x(), v.y() * v.y(), v.z() * v.z(), v.x() * v.y(),
      v.x() * v.z(), v.y() * v.z();
  return out;
}

struct SphereNullspaceResult {
  int dimension = 0;
  Eigen::MatrixXd basis_coefficients;
  std::vector<double> singular_values;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  double gap = 0;
  bool inconclusive = false;
  std::vector<double> validation_residuals;
};

inline SphereNullspaceResult nullspace_solve_sphere(int n_samples, std::uint64_t seed,
                                                    int n_validation = 10000) {
  if (n_samples < 10 * kSphereBasis)
    throw std::invalid_argument("nullspace_solve_sphere: need at least 100 samples");
  std::normal_distribution<double> nd;
  auto sample = [&nd](std::mt19937_64& g, Vec3& v, Vec3& vb, Vec3& n) {
    v = Vec3{nd(g), nd(g), nd(g)};
    vb = Vec3{nd(g), nd(g), nd(g)};
    n = Vec3{nd(g), nd(g), nd(g)};
    while (n.norm() < 1e-6) n = Vec3{nd(g), nd(g), nd(g)};
    n.normalize();
  };

  Eigen::MatrixXd rows(n_samples, kSphereBasis);
  Eigen::VectorXd second_moment = Eigen::VectorXd::Zero(kSphereBasis);
  for (int i = 0; i < n_samples; ++i) {
    auto g = derived_rng(seed, 37, static_cast<std::uint64_t>(i));
    Vec3 v, vb, n;
    sample(g, v, vb, n);
    const double ex = (v - vb).dot(n);
    const Eigen::VectorXd pre1 = sphere_basis_values(v), pre2 = sphere_basis_values(vb);
    rows.row(i) = ((sphere_basis_values(v - ex * n) - pre1) +
                   (sphere_basis_values(vb + ex * n) - pre2))
                      .transpose();
    second_moment += pre1.cwiseAbs2() + pre2.cwiseAbs2();
  }
  const Eigen::VectorXd scale = (second_moment / (2.0 * n_samples)).cwiseSqrt();
  rows = rows * scale.cwiseInverse().asDiagonal();
  const detail::KernelExtraction ext = detail::extract_kernel(rows, 1e-8);

  SphereNullspaceResult res;
  res.dimension = ext.dimension;
  res.singular_values = ext.singular_values;
  res.sample_count = static_cast<std::size_t>(n_samples);
  res.seed = seed;
  res.gap = ext.gap;
  res.inconclusive = ext.inconclusive;
  res.basis_coefficients = scale.cwiseInverse().asDiagonal() * ext.kernel;
  for (int c = 0; c < res.basis_coefficients.cols(); ++c)
    res.basis_coefficients.col(c).normalize();

  const int dim = static_cast<int>(res.basis_coefficients.cols());
  Eigen::VectorXd worst = Eigen::VectorXd::Zero(dim), value2 = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < n_validation; ++i) {
    auto g = derived_rng(seed, 41, static_cast<std::uint64_t>(i));
    Vec3 v, vb, n;
    sample(g, v, vb, n);
    const double ex = (v - vb).dot(n);
    const Eigen::VectorXd pre1 = sphere_basis_values(v), pre2 = sphere_basis_values(vb);
    const Eigen::VectorXd row =
        (sphere_basis_values(v - ex * n) - pre1) + (sphere_basis_values(vb + ex * n) - pre2);
    for (int c = 0; c < dim; ++c) {
      const auto coef = res.basis_coefficients.col(c);
      worst[c] = std::max(worst[c], std::abs(coef.dot(row)));
      value2[c] += std::pow(coef.dot(pre1), 2) + std::pow(coef.dot(pre2), 2);
    }
  }
  for (int c = 0; c < dim; ++c) {
    const double value_scale = std::sqrt(value2[c] / (2.0 * n_validation));
    res.validation_residuals.push_back(worst[c] / std::max(value_scale, 1e-30));
  }
  return res;
}

// value a kernel element induces on the energy-momentum manifold at fixed
// orientations; invariants must be constant on level sets of 1 + 2 y3 y4
inline double induced_on_manifold(const CandidateInvariant& phi, const EnergyMomentum2& em,
                                  const Vec4& y, double theta, double theta_bar) {
  const Vec6 V = H_P(em, y);
  return phi(v_of(V), om_of(V), theta) + phi(vbar_of(V), ombar_of(V), theta_bar);
}

// a partner of y on the unit sphere with the same y3*y4, generically
// different elsewhere: rotate (y1,y2), optionally swap (y3,y4), rescale the
// (y3,y4) block along its hyperbola and rebalance (y1,y2)
inline Vec4 matched_partner(const Vec4& y, std::mt19937_64& g) {
  std::uniform_real_distribution<double> ua(0, 2 * kPi), ut(0.8, 1.25);
  std::bernoulli_distribution flip(0.5);
  Vec4 out = y;
  if (flip(g)) std::swap(out[2], out[3]);
  const double planar2 = out[0] * out[0] + out[1] * out[1];
  if (planar2 > 1e-12) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      const double t = ut(g);
      const double rest = 1.0 - t * t * out[2] * out[2] - out[3] * out[3] / (t * t);
      if (rest < 0) continue;
      const double s = std::sqrt(rest / planar2);
      out[0] *= s;
      out[1] *= s;
      out[2] *= t;
      out[3] /= t;
      break;
    }
  }
  const double ang = ua(g);
  const double c = std::cos(ang), s = std::sin(ang);
  const double x = out[0], yy = out[1];
  out[0] = c * x - s * yy;
  out[1] = s * x + c * yy;
  return out;
}

// worst discrepancy of the induced values over matched pairs for one candidate
inline double reduced_dependence_single(const CandidateInvariant& phi, const EnergyMomentum2& em,
                                        int n_pairs, std::uint64_t seed) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ua(0, 2 * kPi);
  double worst = 0;
  for (int i = 0; i < n_pairs; ++i) {
    auto g = derived_rng(seed, 43, static_cast<std::uint64_t>(i));
    Vec4 y{nd(g), nd(g), nd(g), nd(g)};
    while (y.norm() < 1e-6) y = Vec4{nd(g), nd(g), nd(g), nd(g)};
    y.normalize();
    const Vec4 y2 = matched_partner(y, g);
    const double th = ua(g), thb = ua(g);
    worst = std::max(worst, std::abs(induced_on_manifold(phi, em, y, th, thb) -
                                     induced_on_manifold(phi, em, y2, th, thb)));
  }
  return worst;
}

// same, maximized over all kernel elements of a solve
inline double reduced_dependence_check(const NullspaceResult& result, const EnergyMomentum2& em,
                                       int n_pairs, std::uint64_t seed) {
  double worst = 0;
  for (int c = 0; c < result.basis_coefficients.cols(); ++c) {
    const CandidateInvariant phi{result.spec, result.basis_coefficients.col(c)};
    worst = std::max(worst, reduced_dependence_single(phi, em, n_pairs, seed));
  }
  return worst;
}

}  // namespace hardscat
