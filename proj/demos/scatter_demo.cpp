// Scatters two eccentric bodies off-centre with both collision families and
// prints the event history side by side. The canonical family reflects the
// normal velocity; the noncanonical one also trades spin through the contact.

#include <cstdio>

#include "hardscat/dynamics.hpp"

using namespace hardscat;

namespace {

void run(const ConvexBody2D& body, const MassInertia& mi, Family fam, const char* label) {
  ParticleState init;
  init.theta = 0.3;
  init.theta_bar = 2.1;
  init.x_bar = Vec2{3.0, 0.35};
  init.V << 1.0, 0.0, -1.0, 0.0, 0.0, 0.0;

  const SimulationResult res = simulate(body, mi, init, fam, 3.0);
  std::printf("%s family: %zu event(s), min gap %.3e\n", label, res.events.size(),
              res.min_gap);
  for (const TrajectoryEvent& ev : res.events) {
    std::printf("  t=%.6f  psi=%.4f\n", ev.t_event, ev.beta_at_contact.psi);
    std::printf("    pre  v=(%+.4f,%+.4f) vbar=(%+.4f,%+.4f) w=%+.4f wbar=%+.4f\n",
                ev.V_pre[0], ev.V_pre[1], ev.V_pre[2], ev.V_pre[3], ev.V_pre[4],
                ev.V_pre[5]);
    std::printf("    post v=(%+.4f,%+.4f) vbar=(%+.4f,%+.4f) w=%+.4f wbar=%+.4f\n",
                ev.V_post[0], ev.V_post[1], ev.V_post[2], ev.V_post[3], ev.V_post[4],
                ev.V_post[5]);
    const double ein = kinetic_form(mi, ev.V_pre);
    std::printf("    energy drift %.2e, momentum drift (%.2e, %.2e)\n",
                std::abs(kinetic_form(mi, ev.V_post) - ein) / ein,
                mi.m * (ev.V_post[0] + ev.V_post[2] - ev.V_pre[0] - ev.V_pre[2]),
                mi.m * (ev.V_post[1] + ev.V_post[3] - ev.V_pre[1] - ev.V_pre[3]));
  }
  const ParticleState& fin = res.final_state;
  std::printf("  final x=(%+.4f,%+.4f) xbar=(%+.4f,%+.4f) w=%+.4f wbar=%+.4f\n\n",
              fin.x.x(), fin.x.y(), fin.x_bar.x(), fin.x_bar.y(), fin.V[4], fin.V[5]);
}

}  // namespace

int main() {
  const ConvexBody2D body{SupportFourier{{1.0, 0, 0.12}, {0, 0.05}}};
  const MassInertia mi = body.mass_inertia();
  std::printf("body: eccentric support-Fourier oval, m=%.4f J=%.4f\n\n", mi.m, mi.J);
  run(body, mi, Family::canonical, "canonical");
  run(body, mi, Family::noncanonical, "noncanonical");
  return 0;
}
