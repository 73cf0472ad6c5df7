#pragma once
// Shared fixed-size types, angle helpers, and deterministic RNG derivation.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>

namespace hardscat {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr double kPi = 3.14159265358979323846;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline Vec2 dir(double psi) { return {std::cos(psi), std::sin(psi)}; }

// counterclockwise quarter turn
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

inline Mat2 rot(double th) {
  const double c = std::cos(th), s = std::sin(th);
  Mat2 R;
  R << c, -s, s, c;
  return R;
}

struct MassInertia {
  double m = 1.0;  // mass
  double J = 1.0;  // second moment about the rotation centre
};

// collision configuration: line of centres direction and the two orientations
struct CollisionParam2D {
  double psi = 0.0;
  double theta = 0.0;
  double theta_bar = 0.0;
};

// diag(sqrt m, sqrt m, sqrt m, sqrt m, sqrt J, sqrt J)
inline Mat6 mass_matrix(const MassInertia& mi) {
  Vec6 diag;
  const double sm = std::sqrt(mi.m), sj = std::sqrt(mi.J);
  diag << sm, sm, sm, sm, sj, sj;
  return diag.asDiagonal();
}

// velocity layout V = [v, vbar, omega, omega_bar]
inline Vec2 v_of(const Vec6& V) { return V.segment<2>(0); }
inline Vec2 vbar_of(const Vec6& V) { return V.segment<2>(2); }
inline double om_of(const Vec6& V) { return V[4]; }
inline double ombar_of(const Vec6& V) { return V[5]; }

inline Vec6 pack_velocity(const Vec2& v, const Vec2& vb, double om, double omb) {
  Vec6 V;
  V << v.x(), v.y(), vb.x(), vb.y(), om, omb;
  return V;
}

// kinetic energy functional |M V|^2 = m|v|^2 + m|vbar|^2 + J w^2 + J wbar^2
inline double kinetic_form(const MassInertia& mi, const Vec6& V) {
  return mi.m * (V.segment<4>(0).squaredNorm()) + mi.J * (V[4] * V[4] + V[5] * V[5]);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-sample engine derivation: sampling stays deterministic for a given seed
// independent of loop structure or batching.
inline std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t index = 0) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ (0xa5a5a5a5a5a5a5a5ULL * (stream + 1))) + index));
}

inline Vec6 sample_normal6(std::mt19937_64& g) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec6 V;
  for (int i = 0; i < 6; ++i) V[i] = N(g);
  return V;
}

}  // namespace hardscat
