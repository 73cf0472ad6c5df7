#include <catch2/catch_amalgamated.hpp>

#include "hardscat/dynamics.hpp"

using namespace hardscat;

namespace {

ConvexBody2D eccentric_body() { return ConvexBody2D{SupportFourier{{1.0, 0, 0.12}, {0, 0.05}}}; }

// disks r=0.5 three apart, closing at speed 2 along the line of centres
ParticleState head_on_disks() {
  ParticleState s;
  s.x = Vec2{0, 0};
  s.x_bar = Vec2{3, 0};
  s.V << 1, 0, -1, 0, 0, 0;
  return s;
}

// random spinning pair with moderate clearance, closing along the centre line
ParticleState random_approach(const ConvexBody2D& body, std::mt19937_64& g) {
  std::uniform_real_distribution<double> ua(0, 2 * kPi), uc(0.2, 0.6), uv(0.6, 1.5);
  std::normal_distribution<double> nd;
  ParticleState s;
  s.theta = ua(g);
  s.theta_bar = ua(g);
  const double psi = ua(g);
  const double d = docd(body, {psi, s.theta, s.theta_bar});
  s.x_bar = (d + uc(g)) * dir(psi);
  const Vec2 e = dir(psi), ep = perp(e);
  const Vec2 v = 0.2 * nd(g) * e + 0.25 * nd(g) * ep;
  const Vec2 vb = v - uv(g) * e + 0.25 * nd(g) * ep;
  s.V << v.x(), v.y(), vb.x(), vb.y(), 0.7 * nd(g), 0.7 * nd(g);
  return s;
}

// replay the deterministic flight segments to recover the state at an event
ParticleState state_at_event(const ConvexBody2D& body, const ParticleState& init,
                             const std::vector<TrajectoryEvent>& events, std::size_t k) {
  ParticleState cur = init;
  for (std::size_t i = 0; i <= k; ++i) {
    cur = drift(cur, events[i].t_event - cur.t);
    if (i < k) cur.V = events[i].V_post;
  }
  return cur;
}

}  // namespace

TEST_CASE("head-on disks meet at the analytic time") {
  const ConvexBody2D disk{Disk{0.5}};
  const auto t = collision_time(disk, head_on_disks(), 5.0);
  REQUIRE(t.has_value());
  CHECK(std::abs(*t - 1.0) < 1e-9);  // gap 2 closes at speed 2

  ParticleState shifted = head_on_disks();
  shifted.t = 2.5;
  const auto t2 = collision_time(disk, shifted, 5.0);
  REQUIRE(t2.has_value());
  CHECK(std::abs(*t2 - 3.5) < 1e-9);

  ParticleState parallel = head_on_disks();
  parallel.V << 0, 1, 0, 1, 0, 0;
  CHECK_FALSE(collision_time(disk, parallel, 10.0).has_value());

  ParticleState receding = head_on_disks();
  receding.V << -1, 0, 1, 0, 0, 0;
  CHECK_FALSE(collision_time(disk, receding, 10.0).has_value());

  CHECK_FALSE(collision_time(disk, head_on_disks(), 0.5).has_value());
}

TEST_CASE("initial overlap is rejected") {
  const ConvexBody2D disk{Disk{0.5}};
  ParticleState s = head_on_disks();
  s.x_bar = Vec2{0.9, 0};
  CHECK_THROWS_AS(collision_time(disk, s, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(simulate(disk, disk.mass_inertia(), s, Family::canonical, 1.0),
                  std::invalid_argument);
}

TEST_CASE("rotating smooth bodies: refined roots sit on the contact set") {
  const ConvexBody2D body = eccentric_body();
  auto g = derived_rng(47, 0);
  int found = 0;
  for (int it = 0; it < 40; ++it) {
    const ParticleState s = random_approach(body, g);
    const auto t = collision_time(body, s, 4.0);
    if (!t) continue;
    ++found;
    const ParticleState hit = drift(s, *t - s.t);
    CHECK(std::abs(gap(body, hit)) <= 1e-9);
    CHECK(gap_rate(body, hit) <= kGrazingRate);
  }
  CHECK(found >= 30);
}

TEST_CASE("head-on disks, canonical family: velocities exchange once") {
  const ConvexBody2D disk{Disk{0.5}};
  const SimulationResult res =
      simulate(disk, disk.mass_inertia(), head_on_disks(), Family::canonical, 3.0);
  REQUIRE(res.events.size() == 1);
  const TrajectoryEvent& ev = res.events[0];
  CHECK(std::abs(ev.t_event - 1.0) < 1e-9);
  CHECK_FALSE(ev.grazing);
  CHECK(std::abs(ev.beta_at_contact.psi) < 1e-9);
  Vec6 swapped;
  swapped << -1, 0, 1, 0, 0, 0;
  CHECK((ev.V_post - swapped).norm() < 1e-9);
  CHECK_FALSE(res.truncated);
  CHECK(res.min_gap >= -1e-9);
  CHECK((res.final_state.x - Vec2{-1, 0}).norm() < 1e-8);
  CHECK((res.final_state.x_bar - Vec2{4, 0}).norm() < 1e-8);
}

TEST_CASE("head-on disks, non-canonical family matches the element-wise map") {
  const ConvexBody2D disk{Disk{0.5}};
  const MassInertia mi = disk.mass_inertia();
  const SimulationResult res = simulate(disk, mi, head_on_disks(), Family::noncanonical, 3.0);
  REQUIRE(!res.events.empty());
  const TrajectoryEvent& ev = res.events[0];
  const Vec6 ew = elementwise_noncanonical(mi, 1.0, ev.beta_at_contact.psi, ev.V_pre);
  CHECK((ev.V_post - ew).norm() < 1e-10);
  CHECK(res.min_gap >= -1e-9);
}

TEST_CASE("offset miss produces no events") {
  const ConvexBody2D disk{Disk{0.5}};
  ParticleState s = head_on_disks();
  s.x_bar = Vec2{3, 2};
  const SimulationResult res = simulate(disk, disk.mass_inertia(), s, Family::canonical, 3.0);
  CHECK(res.events.empty());
  CHECK(res.min_gap > 0);
  CHECK(res.final_state.t == 3.0);
  CHECK((res.final_state.x - Vec2{3, 0}).norm() < 1e-12);
}

TEST_CASE("per-event conservation and half-space certificates") {
  const ConvexBody2D body = eccentric_body();
  const MassInertia mi = body.mass_inertia();
  const Mat6 M = mass_matrix(body.mass_inertia());
  auto g = derived_rng(47, 1);
  int events_seen = 0;
  for (int it = 0; it < 60; ++it) {
    const ParticleState init = random_approach(body, g);
    for (Family fam : {Family::canonical, Family::noncanonical}) {
      const SimulationResult res = simulate(body, mi, init, fam, 2.5);
      CHECK(res.min_gap >= -1e-9);
      for (std::size_t k = 0; k < res.events.size(); ++k) {
        const TrajectoryEvent& ev = res.events[k];
        REQUIRE_FALSE(ev.grazing);
        ++events_seen;

        const ParticleState at = state_at_event(body, init, res.events, k);
        CHECK(std::abs(gap(body, at)) <= 1e-9);

        const Vec6 dV = ev.V_post - ev.V_pre;
        CHECK(std::abs(mi.m * (dV[0] + dV[2])) <= 1e-10);
        CHECK(std::abs(mi.m * (dV[1] + dV[3])) <= 1e-10);
        const double e_pre = (M * ev.V_pre).squaredNorm();
        CHECK(std::abs((M * ev.V_post).squaredNorm() - e_pre) <= 1e-9 * std::max(1.0, e_pre));

        const double d = docd(body, ev.beta_at_contact);
        const Vec6 a = alpha_functional(mi, d, ev.beta_at_contact.psi);
        CHECK(std::abs(a.dot(dV)) <= 1e-9 * std::max(1.0, std::abs(a.dot(ev.V_pre))));

        const Vec6 N = unit_normal_N(body, ev.beta_at_contact);
        CHECK(ev.V_pre.dot(N) <= 1e-10);
        CHECK(ev.V_post.dot(N) >= -1e-10);
      }
    }
  }
  INFO("events seen " << events_seen);
  CHECK(events_seen >= 80);
}

TEST_CASE("backwards replay recovers the pre-event state") {
  const ConvexBody2D bodies[] = {ConvexBody2D{Disk{0.5}}, eccentric_body()};
  auto g = derived_rng(47, 2);
  int replayed = 0;
  for (const ConvexBody2D& body : bodies) {
    const MassInertia mi = body.mass_inertia();
    for (Family fam : {Family::canonical, Family::noncanonical}) {
      for (int it = 0; it < 6; ++it) {
        const ParticleState init =
            body.is_smooth() && it > 0 ? random_approach(body, g) : head_on_disks();
        const SimulationResult fwd = simulate(body, mi, init, fam, 3.0);
        if (fwd.events.empty()) continue;
        ++replayed;
        const ParticleState at = state_at_event(body, init, fwd.events, 0);

        ParticleState rev = at;
        rev.V = -fwd.events[0].V_post;
        rev.t = 0;
        const double span = fwd.events[0].t_event - init.t;
        const SimulationResult back = simulate(body, mi, rev, fam, span);
        REQUIRE(!back.events.empty());
        CHECK(back.events[0].t_event <= 1e-9);
        const ParticleState& fin = back.final_state;
        CHECK((fin.x - init.x).norm() <= 1e-6);
        CHECK((fin.x_bar - init.x_bar).norm() <= 1e-6);
        CHECK(std::abs(fin.theta - init.theta) <= 1e-6);
        CHECK(std::abs(fin.theta_bar - init.theta_bar) <= 1e-6);
        CHECK((fin.V + init.V).norm() <= 1e-6);
      }
    }
  }
  CHECK(replayed >= 12);
}

TEST_CASE("tangential pass is a miss, not a collision") {
  const ConvexBody2D disk{Disk{0.5}};
  ParticleState s = head_on_disks();
  s.x_bar = Vec2{3, 1};  // impact parameter equals the touching distance
  const SimulationResult res = simulate(disk, disk.mass_inertia(), s, Family::canonical, 3.0);
  CHECK(res.events.empty());
  CHECK(res.min_gap >= -1e-9);
}

TEST_CASE("event budget truncation flags the log") {
  const ConvexBody2D disk{Disk{0.5}};
  const SimulationResult res =
      simulate(disk, disk.mass_inertia(), head_on_disks(), Family::canonical, 3.0, 1);
  REQUIRE(res.events.size() == 1);
  CHECK(res.truncated);
  CHECK(res.final_state.t == res.events[0].t_event);
}

TEST_CASE("event log renders one CSV row per event with flags") {
  const ConvexBody2D disk{Disk{0.5}};
  const SimulationResult res =
      simulate(disk, disk.mass_inertia(), head_on_disks(), Family::noncanonical, 3.0);
  REQUIRE(!res.events.empty());

  std::vector<TrajectoryEvent> events = res.events;
  TrajectoryEvent graze = events[0];
  graze.grazing = true;
  graze.V_post = graze.V_pre;
  events.push_back(graze);

  const std::string csv = event_log_csv(events, true);
  std::istringstream is(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) lines.push_back(line);
  REQUIRE(lines.size() == events.size() + 1);
  CHECK(lines[0].rfind("t,psi,theta,theta_bar,", 0) == 0);
  for (const std::string& l : lines) CHECK(std::count(l.begin(), l.end(), ',') == 16);
  CHECK(lines.back().find("grazing;truncated") != std::string::npos);
  CHECK(lines[1].find("grazing") == std::string::npos);

  // first column of the first event row reproduces the event time
  const double t0 = std::stod(lines[1].substr(0, lines[1].find(',')));
  CHECK(std::abs(t0 - res.events[0].t_event) < 1e-15);
}
