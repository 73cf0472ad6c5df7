#pragma once
// Event-driven dynamics of two congruent convex hard particles: free flight
// between contacts, one scattering family applied at each contact. Contact
// detection runs on the gap function F = |x - x_bar|^2 - d^2 with d the
// distance of closest approach at the current (psi, theta, theta_bar).

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardscat/scattering.hpp"

namespace hardscat {

struct ParticleState {
  Vec2 x{0, 0};
  Vec2 x_bar{0, 0};
  double theta = 0;
  double theta_bar = 0;
  Vec6 V = Vec6::Zero();  // (v, v_bar, omega, omega_bar)
  double t = 0;
};

inline ParticleState drift(const ParticleState& s, double dt) {
  ParticleState out = s;
  out.x += dt * s.V.segment<2>(0);
  out.x_bar += dt * s.V.segment<2>(2);
  out.theta += dt * s.V[4];
  out.theta_bar += dt * s.V[5];
  out.t += dt;
  return out;
}

inline CollisionParam2D collision_param(const ParticleState& s) {
  const Vec2 r = s.x_bar - s.x;
  if (r.squaredNorm() == 0) throw std::invalid_argument("collision_param: coincident centres");
  return {std::atan2(r.y(), r.x()), s.theta, s.theta_bar};
}

inline double gap(const ConvexBody2D& body, const ParticleState& s) {
  const double d = docd(body, collision_param(s));
  return (s.x_bar - s.x).squaredNorm() - d * d;
}

// dF/dt along free flight. Analytic via the docd partials for smooth bodies;
// central time difference for polygons, whose support is not differentiable.
inline double gap_rate(const ConvexBody2D& body, const ParticleState& s) {
  if (!body.is_smooth()) {
    const double h = 1e-7;
    return (gap(body, drift(s, h)) - gap(body, drift(s, -h))) / (2 * h);
  }
  const Vec2 r = s.x_bar - s.x;
  const Vec2 rdot = s.V.segment<2>(2) - s.V.segment<2>(0);
  const CollisionParam2D beta = collision_param(s);
  const double d = docd(body, beta);
  const DocdPartials dp = docd_partials(body, beta);
  const double psi_dot = (r.x() * rdot.y() - r.y() * rdot.x()) / r.squaredNorm();
  return 2 * r.dot(rdot) -
         2 * d * (dp.d_psi * psi_dot + dp.d_theta * s.V[4] + dp.d_theta_bar * s.V[5]);
}

inline constexpr double kOverlapTol = 1e-9;
inline constexpr double kRootTimeTol = 1e-12;
inline constexpr double kGrazingRate = 1e-12;
inline constexpr double kStepFloor = 1e-4;

// earliest absolute time t* in (state.t, t_max] with F = 0 and the contact
// approaching; adaptive march (step 0.1 * clearance / speed, floored) followed
// by bisection of the bracketed sign change
inline std::optional<double> collision_time(const ConvexBody2D& body, const ParticleState& state,
                                            double t_max) {
  const double F0 = gap(body, state);
  if (F0 < -kOverlapTol) throw std::invalid_argument("collision_time: initial overlap");
  if (F0 <= 0 && gap_rate(body, state) < -kGrazingRate) return state.t;

  const double rad = body.max_radius();
  auto F_at = [&](double t) { return gap(body, drift(state, t - state.t)); };

  double t = state.t, F = F0;
  while (t < t_max) {
    const ParticleState here = drift(state, t - state.t);
    const Vec2 r = here.x_bar - here.x;
    const Vec2 rdot = here.V.segment<2>(2) - here.V.segment<2>(0);
    const double d = docd(body, collision_param(here));
    const double clearance = std::max(r.norm() - d, 0.0);
    const double speed = rdot.norm() + rad * (std::abs(here.V[4]) + std::abs(here.V[5]));
    double step = speed > 0 ? 0.1 * clearance / speed : t_max - t;
    step = std::min(std::max(step, kStepFloor), t_max - t);

    const double t_next = t + step;
    const double F_next = F_at(t_next);
    if (F >= 0 && F_next < 0) {
      double a = t, b = t_next;  // F(a) >= 0 > F(b)
      while (b - a > kRootTimeTol) {
        const double mid = 0.5 * (a + b);
        (F_at(mid) >= 0 ? a : b) = mid;
      }
      return a;
    }
    t = t_next;
    F = F_next;
  }
  return std::nullopt;
}

struct TrajectoryEvent {
  double t_event = 0;
  CollisionParam2D beta_at_contact;
  Vec6 V_pre = Vec6::Zero();
  Vec6 V_post = Vec6::Zero();
  Family family = Family::canonical;
  bool grazing = false;  // |dF/dt| at the root below threshold: no-op
};

struct SimulationResult {
  std::vector<TrajectoryEvent> events;
  ParticleState final_state;
  double min_gap = std::numeric_limits<double>::infinity();  // over sampled flight points
  bool truncated = false;  // max_events reached before the horizon
};

inline constexpr int kFlightSamples = 64;

inline SimulationResult simulate(const ConvexBody2D& body, const MassInertia& mi,
                                 const ParticleState& init, Family family, double horizon,
                                 int max_events = 1000) {
  if (gap(body, init) < -kOverlapTol)
    throw std::invalid_argument("simulate: initial state overlaps");
  if (horizon <= init.t) throw std::invalid_argument("simulate: horizon before start");

  SimulationResult out;
  ParticleState cur = init;
  while (cur.t < horizon) {
    const std::optional<double> hit = collision_time(body, cur, horizon);
    const double t_end = hit.value_or(horizon);
    for (int i = 1; i <= kFlightSamples; ++i) {
      const double dt = (t_end - cur.t) * i / kFlightSamples;
      out.min_gap = std::min(out.min_gap, gap(body, drift(cur, dt)));
    }
    cur = drift(cur, t_end - cur.t);
    if (!hit) break;

    TrajectoryEvent ev;
    ev.t_event = t_end;
    ev.beta_at_contact = collision_param(cur);
    ev.V_pre = cur.V;
    ev.family = family;
    const double rate = gap_rate(body, cur);
    if (rate < -kGrazingRate) {
      ev.V_post = sigma_family(family, body, mi, ev.beta_at_contact) * ev.V_pre;
    } else {
      ev.V_post = ev.V_pre;  // tangential touch: the half-space condition is vacuous
      ev.grazing = true;
    }
    cur.V = ev.V_post;
    out.events.push_back(ev);
    if (static_cast<int>(out.events.size()) >= max_events && cur.t < horizon) {
      out.truncated = true;
      break;
    }
  }
  out.final_state = cur;
  return out;
}

// one row per event: t, psi, theta, theta_bar, 6 pre-velocities,
// 6 post-velocities, flags
inline std::string event_log_csv(const std::vector<TrajectoryEvent>& events,
                                 bool truncated = false) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t,psi,theta,theta_bar,pre_v1,pre_v2,pre_vbar1,pre_vbar2,pre_omega,pre_omega_bar,"
        "post_v1,post_v2,post_vbar1,post_vbar2,post_omega,post_omega_bar,flags\n";
  for (std::size_t k = 0; k < events.size(); ++k) {
    const TrajectoryEvent& ev = events[k];
    os << ev.t_event << ',' << ev.beta_at_contact.psi << ',' << ev.beta_at_contact.theta << ','
       << ev.beta_at_contact.theta_bar;
    for (int i = 0; i < 6; ++i) os << ',' << ev.V_pre[i];
    for (int i = 0; i < 6; ++i) os << ',' << ev.V_post[i];
    std::string flags;
    if (ev.grazing) flags = "grazing";
    if (truncated && k + 1 == events.size()) flags += flags.empty() ? "truncated" : ";truncated";
    os << ',' << flags << '\n';
  }
  return os.str();
}

}  // namespace hardscat
