// Solves for the collision invariants of an eccentric body numerically and
// prints the kernel dimension, the singular-value ladder around the cut, and
// the recovered basis vectors against the named candidate functions.

#include <cstdio>
#include <vector>

#include "hardscat/invariants.hpp"

using namespace hardscat;

namespace {

const char* monomial_names[] = {"v1",    "v2",    "w",    "v1^2", "v2^2",
                                "w^2",   "v1*v2", "v1*w", "v2*w"};

void run(Family fam, const char* label) {
  const ConvexBody2D body{SupportFourier{{1.0, 0, 0.12}, {0, 0.05}}};
  const MassInertia mi = body.mass_inertia();
  const BasisSpec spec{1, false};  // Fourier order 1 in psi, no cross terms
  const NullspaceResult res = nullspace_solve(fam, mi, body, spec, 10 * spec.size(), 42, 2000);

  std::printf("%s family, basis size %d:\n", label, spec.size());
  std::printf("  kernel dimension %d (expected %d), SV gap %.1e%s\n", res.dimension,
              2 * spec.fourier_order + 1 + 3, res.gap,
              res.inconclusive ? "  [inconclusive]" : "");
  const int n = static_cast<int>(res.singular_values.size());
  const int cut = n - res.dimension;
  std::printf("  singular values around the cut:");
  for (int i = std::max(0, cut - 2); i < std::min(n, cut + 2); ++i)
    std::printf(" %.2e%s", res.singular_values[i], i == cut - 1 ? " |" : "");
  std::printf("\n");

  double val_w = 0;
  for (double r : res.validation_residuals) val_w = std::max(val_w, r);
  std::printf("  worst residual on fresh collisions: %.2e\n", val_w);

  const int fc = 2 * spec.fourier_order + 1;
  for (int c = 0; c < res.dimension; ++c) {
    std::printf("  invariant %d:", c + 1);
    for (int i = 0; i < spec.size(); ++i) {
      const double a = res.basis_coefficients(i, c);
      if (std::abs(a) < 1e-6) continue;
      if (i < fc)
        std::printf(" %+.3f*f%d(psi)", a, i);
      else
        std::printf(" %+.3f*%s", a, monomial_names[i - fc]);
    }
    std::printf("\n");
  }
  std::printf("\n");
}

}  // namespace

int main() {
  run(Family::canonical, "canonical");
  run(Family::noncanonical, "noncanonical");
  return 0;
}
