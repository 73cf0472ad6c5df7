#pragma once
// Numerical probes of the Lie algebras behind the reduced scattering groups:
// generator curves obtained by differentiating the reflection vectors along
// psi, their span ranks, the direction span of gamma_hat itself, and an
// exploratory random-word sampler for reflection-generated groups.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hardscat/core.hpp"
#include "hardscat/geometry.hpp"
#include "hardscat/reduction.hpp"
#include "hardscat/spheres.hpp"

namespace hardscat {

enum class GeneratorKind { k_hat, gamma_hat, sphere };

struct Generator4 {
  Mat4 matrix;
  double psi = 0;
  GeneratorKind provenance = GeneratorKind::k_hat;
};

struct Generator3 {
  Mat3 matrix;
  double psi = 0;
  GeneratorKind provenance = GeneratorKind::gamma_hat;
};

inline constexpr double kGeneratorStep = 1e-5;

namespace detail {

inline void require_smooth(const ConvexBody2D& body, const char* who) {
  if (!body.is_smooth())
    throw std::invalid_argument(std::string(who) + ": derivative in psi needs a strictly convex body");
}

}  // namespace detail

// d/dpsi k_hat (x) k_hat - k_hat (x) d/dpsi k_hat, central difference carrying
// the psi-dependence of the touching distance along
inline Generator4 generator4(const MassInertia& mi, const ConvexBody2D& body,
                             const CollisionParam2D& beta, double step = kGeneratorStep) {
  detail::require_smooth(body, "generator4");
  CollisionParam2D lo = beta, hi = beta;
  lo.psi -= step;
  hi.psi += step;
  const Vec4 k = k_hat_from(mi, docd(body, beta), beta.psi);
  const Vec4 dk =
      (k_hat_from(mi, docd(body, hi), hi.psi) - k_hat_from(mi, docd(body, lo), lo.psi)) / (2 * step);
  return {dk * k.transpose() - k * dk.transpose(), beta.psi, GeneratorKind::k_hat};
}

inline Generator3 generator3(const MassInertia& mi, const ConvexBody2D& body,
                             const CollisionParam2D& beta, double step = kGeneratorStep) {
  detail::require_smooth(body, "generator3");
  CollisionParam2D lo = beta, hi = beta;
  lo.psi -= step;
  hi.psi += step;
  const Vec3 g = gamma_hat_from(mi, docd(body, beta), beta.psi);
  const Vec3 dg = (gamma_hat_from(mi, docd(body, hi), hi.psi) -
                   gamma_hat_from(mi, docd(body, lo), lo.psi)) /
                  (2 * step);
  return {dg * g.transpose() - g * dg.transpose(), beta.psi, GeneratorKind::gamma_hat};
}

// distance from the structured form the 4-D generators must take: antisymmetric,
// rows 3 and 4 identical, nothing in the lower-right 2x2 block
inline double k_pattern_residual(const Mat4& G) {
  double r = (G + G.transpose()).cwiseAbs().maxCoeff();
  r += (G.row(2) - G.row(3)).cwiseAbs().maxCoeff();
  r += std::abs(G(2, 3)) + std::abs(G(3, 2));
  return r;
}

// generic span rank of same-shape matrices by full vectorization
inline SpanReport span_rank(const std::vector<Eigen::MatrixXd>& mats, double threshold = 1e-8) {
  if (mats.empty()) throw std::invalid_argument("span_rank: empty matrix list");
  const Eigen::Index nr = mats[0].rows(), nc = mats[0].cols();
  Eigen::MatrixXd rows(mats.size(), nr * nc);
  for (std::size_t r = 0; r < mats.size(); ++r) {
    if (mats[r].rows() != nr || mats[r].cols() != nc)
      throw std::invalid_argument("span_rank: shape mismatch");
    rows.row(r) = Eigen::Map<const Eigen::VectorXd>(mats[r].data(), nr * nc);
  }
  return detail::span_report_from_rows(rows, threshold);
}

template <int N>
inline SpanReport span_rank(const std::vector<Eigen::Matrix<double, N, N>>& mats,
                            double threshold = 1e-8) {
  std::vector<Eigen::MatrixXd> dyn(mats.begin(), mats.end());
  return span_rank(dyn, threshold);
}

// rank of the gamma_hat directions over a psi grid at fixed orientations
inline SpanReport gamma_direction_rank(const MassInertia& mi, const ConvexBody2D& body,
                                       double theta, double theta_bar, int grid_size,
                                       double threshold = 1e-8) {
  detail::require_smooth(body, "gamma_direction_rank");
  if (grid_size < 1) throw std::invalid_argument("gamma_direction_rank: empty grid");
  Eigen::MatrixXd rows(grid_size, 3);
  for (int i = 0; i < grid_size; ++i) {
    const double psi = 2 * kPi * i / grid_size;
    const CollisionParam2D beta{psi, theta, theta_bar};
    rows.row(i) = gamma_hat_from(mi, docd(body, beta), psi).transpose();
  }
  return detail::span_report_from_rows(rows, threshold);
}

struct GroupSampleReport {
  int depth = 0;
  std::size_t sample_count = 0;
  double max_orthogonality = 0;   // worst ||W^T W - I||_F over sampled words
  double max_det_deviation = 0;   // worst ||det W| - 1|
  bool parity_consistent = true;  // sign(det W) == (-1)^(word length)
  std::size_t distinct = 0;       // distinct sampled elements at 1e-9 resolution
  double dispersion = 0;          // mean pairwise Frobenius distance
};

// random words in the given reflections; diagnostic only, no closure claim
inline GroupSampleReport group_sample(const std::vector<Eigen::MatrixXd>& generators, int depth,
                                      int count, std::uint64_t seed) {
  if (generators.empty()) throw std::invalid_argument("group_sample: no generators");
  const Eigen::Index n = generators[0].rows();
  GroupSampleReport rep;
  rep.depth = depth;
  std::vector<Eigen::MatrixXd> words;
  for (int i = 0; i < count; ++i) {
    auto g = derived_rng(seed, 23, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> len_d(1, depth),
        pick(0, static_cast<int>(generators.size()) - 1);
    const int len = len_d(g);
    Eigen::MatrixXd W = Eigen::MatrixXd::Identity(n, n);
    for (int l = 0; l < len; ++l) W = W * generators[pick(g)];
    rep.max_orthogonality =
        std::max(rep.max_orthogonality,
                 (W.transpose() * W - Eigen::MatrixXd::Identity(n, n)).norm());
    const double det = W.determinant();
    rep.max_det_deviation = std::max(rep.max_det_deviation, std::abs(std::abs(det) - 1.0));
    if (det * ((len % 2) ? -1.0 : 1.0) < 0) rep.parity_consistent = false;
    words.push_back(std::move(W));
  }
  rep.sample_count = words.size();
  double total = 0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < words.size(); ++a) {
    bool fresh = true;
    for (std::size_t b = 0; b < a; ++b) {
      const double dist = (words[a] - words[b]).norm();
      total += dist;
      ++pairs;
      if (dist < 1e-9) fresh = false;
    }
    if (fresh) ++rep.distinct;
  }
  rep.dispersion = pairs ? total / pairs : 0.0;
  return rep;
}

}  // namespace hardscat
