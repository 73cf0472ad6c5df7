#include <catch2/catch_amalgamated.hpp>

#include "hardscat/liealg.hpp"
#include "oracles.hpp"

using namespace hardscat;

namespace {

ConvexBody2D rounded_square() { return ConvexBody2D{SupportFourier{{1.0, 0, 0, 0, 0.05}, {}}}; }
ConvexBody2D eccentric_body() { return ConvexBody2D{SupportFourier{{1.0, 0, 0.12}, {0, 0.05}}}; }

CollisionParam2D random_beta(std::mt19937_64& g) {
  std::uniform_real_distribution<double> ua(0, 2 * kPi);
  return {ua(g), ua(g), ua(g)};
}

}  // namespace

TEST_CASE("generator4 hand value on the unit-distance disk") {
  const MassInertia unit{1.0, 1.0};
  const ConvexBody2D disk{Disk{0.5}};
  const Generator4 gen = generator4(unit, disk, {0.0, 0.7, -0.3});

  const double a = 1.0 / std::sqrt(5.0), b = std::sqrt(2.0) / std::sqrt(5.0);
  Mat4 expect;
  expect << 0, -a * a, a * b, a * b,
      a * a, 0, 0, 0,
      -a * b, 0, 0, 0,
      -a * b, 0, 0, 0;
  CHECK((gen.matrix - expect).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(gen.provenance == GeneratorKind::k_hat);

  // antisymmetry is structural, not a finite-difference artifact
  CHECK((gen.matrix + gen.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("generator4 K-pattern holds across bodies and parameters") {
  auto g = derived_rng(17, 0);
  std::vector<ConvexBody2D> bodies{ConvexBody2D{Disk{0.5}}, rounded_square(), eccentric_body()};
  for (int i = 0; i < 5; ++i) bodies.push_back(ConvexBody2D{oracle::random_support_fourier(g)});

  std::uniform_real_distribution<double> um(0.5, 3.0), uj(0.2, 2.0);
  for (int it = 0; it < 1000; ++it) {
    const ConvexBody2D& body = bodies[it % bodies.size()];
    const MassInertia mi{um(g), uj(g)};
    const Generator4 gen = generator4(mi, body, random_beta(g));
    CHECK(k_pattern_residual(gen.matrix) < 1e-8);
    CHECK((gen.matrix + gen.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }

  const ConvexBody2D square{
      Polygon{{Vec2{0.5, 0.5}, Vec2{-0.5, 0.5}, Vec2{-0.5, -0.5}, Vec2{0.5, -0.5}}}};
  CHECK_THROWS_AS(generator4(MassInertia{1, 1}, square, CollisionParam2D{0, 0, 0}),
                  std::invalid_argument);
}

TEST_CASE("generator3 disk pattern and step stability") {
  const MassInertia unit{1.0, 1.0};
  const ConvexBody2D disk{Disk{0.5}};
  const Generator3 gen = generator3(unit, disk, {0.0, 0.2, 0.9});

  const double a = 1.0 / std::sqrt(5.0), c = 2.0 / std::sqrt(5.0);
  Mat3 expect;
  expect << 0, -a * a, a * c,
      a * a, 0, 0,
      -a * c, 0, 0;
  CHECK((gen.matrix - expect).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((gen.matrix + gen.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-15);

  // halving the step moves the eccentric-body generator by O(step^2) only
  const ConvexBody2D ecc = eccentric_body();
  auto g = derived_rng(17, 1);
  for (int it = 0; it < 50; ++it) {
    const CollisionParam2D beta = random_beta(g);
    const MassInertia mi = ecc.mass_inertia();
    const Mat3 coarse = generator3(mi, ecc, beta, kGeneratorStep).matrix;
    const Mat3 fine = generator3(mi, ecc, beta, kGeneratorStep / 2).matrix;
    CHECK((coarse - fine).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("generator spans have rank 3 at every orientation") {
  const int kPsi = 16;
  for (const ConvexBody2D& body : {rounded_square(), eccentric_body()}) {
    const MassInertia mi = body.mass_inertia();
    double worst_gap4 = 1e300, worst_gap3 = 1e300;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const double th = 2 * kPi * (i + 0.5) / 8, thb = 2 * kPi * (j + 0.5) / 8;
        std::vector<Mat4> g4;
        std::vector<Mat3> g3;
        for (int s = 0; s < kPsi; ++s) {
          const CollisionParam2D beta{2 * kPi * s / kPsi, th, thb};
          g4.push_back(generator4(mi, body, beta).matrix);
          g3.push_back(generator3(mi, body, beta).matrix);
        }
        const SpanReport r4 = span_rank(g4);
        const SpanReport r3 = span_rank(g3);
        REQUIRE(r4.rank == 3);
        REQUIRE(r3.rank == 3);
        worst_gap4 = std::min(worst_gap4, r4.gap);
        worst_gap3 = std::min(worst_gap3, r3.gap);
      }
    INFO("smallest K-span gap " << worst_gap4 << ", gamma-span gap " << worst_gap3);
    CHECK(worst_gap4 >= 10.0);
    CHECK(worst_gap3 >= 10.0);
  }
}

TEST_CASE("64 psi samples at one orientation already give rank 3") {
  const ConvexBody2D ecc = eccentric_body();
  const MassInertia mi = ecc.mass_inertia();
  std::vector<Mat4> g4;
  std::vector<Mat3> g3;
  for (int s = 0; s < 64; ++s) {
    const CollisionParam2D beta{2 * kPi * s / 64, 0.4, 1.9};
    g4.push_back(generator4(mi, ecc, beta).matrix);
    g3.push_back(generator3(mi, ecc, beta).matrix);
  }
  CHECK(span_rank(g4).rank == 3);
  CHECK(span_rank(g3).rank == 3);
}

TEST_CASE("span_rank edge cases") {
  CHECK_THROWS_AS(span_rank(std::vector<Eigen::MatrixXd>{}), std::invalid_argument);

  const ConvexBody2D disk{Disk{0.5}};
  const MassInertia unit{1.0, 1.0};
  const Mat4 one = generator4(unit, disk, {0.9, 0, 0}).matrix;
  CHECK(span_rank(std::vector<Mat4>{one, 2.0 * one, -0.5 * one}).rank == 1);

  std::vector<Eigen::MatrixXd> mixed{Eigen::MatrixXd::Identity(3, 3),
                                     Eigen::MatrixXd::Identity(4, 4)};
  CHECK_THROWS_AS(span_rank(mixed), std::invalid_argument);
}

TEST_CASE("gamma directions fill space") {
  const MassInertia unit{1.0, 1.0};
  const ConvexBody2D disk{Disk{0.5}};
  const SpanReport disk_rep = gamma_direction_rank(unit, disk, 0.0, 0.0, 16);
  CHECK(disk_rep.rank == 3);
  CHECK_FALSE(disk_rep.flagged_insufficient);

  const ConvexBody2D ecc = eccentric_body();
  const SpanReport ecc_rep = gamma_direction_rank(ecc.mass_inertia(), ecc, 1.2, -0.7, 16);
  CHECK(ecc_rep.rank == 3);
  CHECK(ecc_rep.gap >= 10.0);

  const SpanReport two = gamma_direction_rank(unit, disk, 0.0, 0.0, 2);
  CHECK(two.rank <= 2);
  CHECK(two.flagged_insufficient);
}

TEST_CASE("group sampling diagnostics") {
  const ConvexBody2D ecc = eccentric_body();
  const MassInertia mi = ecc.mass_inertia();
  std::vector<Eigen::MatrixXd> refl;
  for (int s = 0; s < 6; ++s)
    refl.push_back(k_hat(mi, ecc, {2 * kPi * s / 6 + 0.1, 0.3, 1.4}).s_beta);

  const GroupSampleReport rep = group_sample(refl, 32, 200, 99);
  CHECK(rep.sample_count == 200);
  CHECK(rep.max_orthogonality < 1e-9);
  CHECK(rep.max_det_deviation < 1e-9);
  CHECK(rep.parity_consistent);
  CHECK(rep.distinct > 100);  // generic words rarely coincide
  CHECK(rep.dispersion > 0.1);

  // a single reflection generates exactly {I, s}
  const GroupSampleReport solo = group_sample({refl[0]}, 32, 100, 7);
  CHECK(solo.distinct == 2);
  CHECK(solo.parity_consistent);
}
