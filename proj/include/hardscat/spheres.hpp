#pragma once
// Hard-sphere scattering in 3D: the reflection family sigma_n on R^6, the
// energy-momentum parametrization H of the collision manifold, the exact
// intertwining with reflections of S^2, and the so(3) span probe for the
// reflection-generated group.

#include <stdexcept>
#include <vector>

#include <Eigen/SVD>

#include "hardscat/core.hpp"

namespace hardscat {

// sigma_n = I - 2 nu nu^T with nu = [n, -n]/sqrt2, n a unit impact direction
inline Mat6 sigma_sphere(const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("sigma_sphere: n must be a unit vector");
  Vec6 nu;
  nu << n.x(), n.y(), n.z(), -n.x(), -n.y(), -n.z();
  nu /= std::sqrt(2.0);
  return Mat6::Identity() - 2.0 * nu * nu.transpose();
}

// exchange of the normal velocity components
inline std::pair<Vec3, Vec3> elementwise_sphere(const Vec3& n, const Vec3& v, const Vec3& vbar) {
  const double ex = (v - vbar).dot(n);
  return {v - ex * n, vbar + ex * n};
}

// admissible energy-momentum pairs: e^2 > |p|^2 / 2
inline bool sphere_admissible(double e, const Vec3& p) { return e * e > 0.5 * p.squaredNorm(); }

// H(e, p, y) = 1/2 [p - s y, p + s y], s = sqrt(2 e^2 - |p|^2); the norm and
// momentum identities hold on |y| = 1, the formula itself for any y != 0
inline Vec6 H_sphere(double e, const Vec3& p, const Vec3& y) {
  if (!sphere_admissible(e, p))
    throw std::domain_error("H_sphere: inadmissible (e, p), need e^2 > |p|^2/2");
  if (y.norm() == 0.0) throw std::invalid_argument("H_sphere: y must be nonzero");
  const double s = std::sqrt(2 * e * e - p.squaredNorm());
  Vec6 out;
  out << 0.5 * (p - s * y), 0.5 * (p + s * y);
  return out;
}

// || sigma_n H(e,p,y) - H(e,p, (I - 2 n n^T) y) ||
inline double intertwine_sphere(double e, const Vec3& p, const Vec3& y, const Vec3& n) {
  const Vec3 ry = y - 2 * n.dot(y) * n;
  return (sigma_sphere(n) * H_sphere(e, p, y) - H_sphere(e, p, ry)).norm();
}

// spherical parametrization of impact directions; theta2 = 0 is the pole
inline Vec3 spherical_normal(double th1, double th2) {
  return {std::cos(th1) * std::sin(th2), std::sin(th1) * std::sin(th2), std::cos(th2)};
}

// tangent generator d_j n (x) n - n (x) d_j n of the reflection family
inline Mat3 sphere_generator(double th1, double th2, int j) {
  const Vec3 n = spherical_normal(th1, th2);
  Vec3 dn;
  if (j == 0)
    dn = Vec3{-std::sin(th1) * std::sin(th2), std::cos(th1) * std::sin(th2), 0.0};
  else
    dn = Vec3{std::cos(th1) * std::cos(th2), std::sin(th1) * std::cos(th2), -std::sin(th2)};
  return dn * n.transpose() - n * dn.transpose();
}

struct SpanReport {
  int rank = 0;
  std::vector<double> singular_values;
  double gap = 0;  // last kept singular value over first dropped (or over the cut)
  double threshold = 1e-8;
  std::size_t sample_count = 0;
  bool flagged_insufficient = false;
};

namespace detail {

// rank report for a stack of row vectors (one sample per row)
inline SpanReport span_report_from_rows(const Eigen::MatrixXd& rows, double threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  SpanReport rep;
  rep.threshold = threshold;
  rep.sample_count = static_cast<std::size_t>(rows.rows());
  const auto& sv = svd.singularValues();
  for (int i = 0; i < sv.size(); ++i) rep.singular_values.push_back(sv[i]);
  const double cut = threshold * (sv.size() ? sv[0] : 0.0);
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) rep.rank = i + 1;
  if (rep.rank == 0)
    rep.gap = 0;
  else if (rep.rank < sv.size() && sv[rep.rank] > 0)
    rep.gap = sv[rep.rank - 1] / sv[rep.rank];
  else
    rep.gap = sv[rep.rank - 1] / (cut > 0 ? cut : 1e-300);
  rep.flagged_insufficient = int(rep.sample_count) < rep.rank + 1;
  return rep;
}

}  // namespace detail

// rank of a set of antisymmetric matrices, via SVD of their vectorizations
template <int N>
inline SpanReport antisymmetric_span_rank(const std::vector<Eigen::Matrix<double, N, N>>& mats,
                                          double threshold = 1e-8) {
  constexpr int D = N * (N - 1) / 2;
  Eigen::MatrixXd rows(mats.size(), D);
  for (std::size_t r = 0; r < mats.size(); ++r) {
    int k = 0;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) rows(r, k++) = mats[r](i, j);
  }
  return detail::span_report_from_rows(rows, threshold);
}

// generators on an offset grid (poles excluded); expected to span so(3)
inline SpanReport so3_span_probe(int grid = 8, double threshold = 1e-8) {
  std::vector<Mat3> gens;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double th1 = 2 * kPi * (i + 0.5) / grid;
      const double th2 = kPi * (j + 0.5) / grid;
      gens.push_back(sphere_generator(th1, th2, 0));
      gens.push_back(sphere_generator(th1, th2, 1));
    }
  return antisymmetric_span_rank<3>(gens, threshold);
}

}  // namespace hardscat
