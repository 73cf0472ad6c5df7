// Command-line front end: body ingestion, experiment runners, reports.
// Exit codes: 0 pass, 1 verification failure, 2 invalid input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hardscat/dynamics.hpp"
#include "hardscat/io.hpp"
#include "hardscat/liealg.hpp"

using namespace hardscat;
using nlohmann::json;

namespace {

struct Options {
  std::string body_path;
  std::string family_str = "noncanonical";
  int samples = 0;  // 0: per-command default
  std::uint64_t seed = 1;
  int grid = 0;
  int fourier = 1;
  bool cross = false;
  std::string out_path;
  std::string format;
  // simulate extras
  double horizon = 3.0;
  double impact = 0.0;
  // verify extras
  double tolerance = 0.0;  // 0: module defaults
  // invariants extras
  bool sphere_mode = false;
  // sphere-suite extras
  bool corrupt_nu = false;

  std::string command_line;
};

Family family_of(const Options& o) {
  if (o.family_str == "canonical") return Family::canonical;
  if (o.family_str == "noncanonical") return Family::noncanonical;
  throw std::invalid_argument("unknown family: " + o.family_str);
}

void emit(const Options& o, const std::string& content) {
  if (o.out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(o.out_path);
  if (!out) throw std::invalid_argument("cannot open output file: " + o.out_path);
  out << content;
}

void emit_json(const Options& o, json j) {
  emit(o, j.dump(2) + "\n");
}

std::string csv_meta(const Options& o, const std::string& body_hash) {
  std::string s;
  s += "# seed=" + std::to_string(o.seed) + "\n";
  s += "# body_hash=" + body_hash + "\n";
  s += "# tool_version=" + std::string(kVersion) + "\n";
  s += "# command=" + o.command_line + "\n";
  return s;
}

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  if (o.format.empty()) return;
  for (const char* a : allowed)
    if (o.format == a) return;
  throw std::invalid_argument("unsupported --format for this command: " + o.format);
}

int cmd_docd(const Options& o) {
  require_format(o, {"csv", "json"});
  const LoadedBody lb = load_body(o.body_path);
  const int grid = o.grid > 0 ? o.grid : 256;
  std::vector<double> psis(grid), ds(grid);
  for (int i = 0; i < grid; ++i) {
    psis[i] = 2 * kPi * i / grid;
    ds[i] = docd(lb.body, {psis[i], 0.0, 0.0});
  }
  if (o.format == "json") {
    emit_json(o, {{"meta", run_meta(o.seed, lb.body.hash(), o.command_line)},
                  {"theta", 0.0},
                  {"theta_bar", 0.0},
                  {"psi", psis},
                  {"d", ds}});
  } else {
    std::string s = csv_meta(o, lb.body.hash()) + "psi,d\n";
    for (int i = 0; i < grid; ++i) s += csv_num(psis[i]) + "," + csv_num(ds[i]) + "\n";
    emit(o, s);
  }
  return 0;
}

int cmd_verify(const Options& o) {
  require_format(o, {"json"});
  const LoadedBody lb = load_body(o.body_path);
  const Family fam = family_of(o);
  if (fam == Family::canonical && !lb.body.is_smooth())
    throw std::invalid_argument(
        "canonical verification needs a differentiable support function (polygon given)");

  VerificationTolerances tol;
  if (o.tolerance > 0) {
    tol.det = tol.alpha = tol.energy_rel = o.tolerance;
    tol.ehat = o.tolerance;
    tol.halfspace = -o.tolerance;
  }
  const int n_beta = o.grid > 0 ? o.grid : 25;
  const int per_beta = o.samples > 0 ? o.samples : 200;

  json per = json::array();
  VerificationReport agg;
  agg.halfspace_worst = 1e300;
  bool all_pass = true;
  for (int i = 0; i < n_beta; ++i) {
    auto g = derived_rng(o.seed, 53, i);
    std::uniform_real_distribution<double> ua(0, 2 * kPi);
    const CollisionParam2D beta{ua(g), ua(g), ua(g)};
    const VerificationReport r =
        verify_physical(fam, lb.body, lb.mi, beta, per_beta, o.seed + 7919 * i, tol);
    per.push_back(to_json(r));
    all_pass = all_pass && r.pass;
    agg.det_residual = std::max(agg.det_residual, r.det_residual);
    agg.e1_residual = std::max(agg.e1_residual, r.e1_residual);
    agg.e2_residual = std::max(agg.e2_residual, r.e2_residual);
    agg.alpha_residual = std::max(agg.alpha_residual, r.alpha_residual);
    agg.energy_rel_residual = std::max(agg.energy_rel_residual, r.energy_rel_residual);
    agg.halfspace_worst = std::min(agg.halfspace_worst, r.halfspace_worst);
    agg.halfspace_checked += r.halfspace_checked;
    agg.halfspace_violations += r.halfspace_violations;
  }
  emit_json(o, {{"meta", run_meta(o.seed, lb.body.hash(), o.command_line)},
                {"family", family_name(fam)},
                {"n_beta", n_beta},
                {"samples_per_beta", per_beta},
                {"worst",
                 {{"det_residual", agg.det_residual},
                  {"e1_residual", agg.e1_residual},
                  {"e2_residual", agg.e2_residual},
                  {"alpha_residual", agg.alpha_residual},
                  {"energy_rel_residual", agg.energy_rel_residual},
                  {"halfspace_worst", agg.halfspace_worst},
                  {"halfspace_checked", agg.halfspace_checked},
                  {"halfspace_violations", agg.halfspace_violations}}},
                {"per_beta", per},
                {"pass", all_pass}});
  return all_pass ? 0 : 1;
}

int cmd_lie(const Options& o) {
  require_format(o, {"json"});
  const LoadedBody lb = load_body(o.body_path);
  const int grid = o.grid > 0 ? o.grid : 8;

  std::vector<Mat4> g4;
  std::vector<Mat3> g3;
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b)
      for (int c = 0; c < grid; ++c) {
        const CollisionParam2D beta{2 * kPi * c / grid, 2 * kPi * (a + 0.5) / grid,
                                    2 * kPi * (b + 0.5) / grid};
        g4.push_back(generator4(lb.mi, lb.body, beta).matrix);
        g3.push_back(generator3(lb.mi, lb.body, beta).matrix);
      }
  const SpanReport k_span = span_rank<4>(g4);
  const SpanReport gamma_span = span_rank<3>(g3);
  const SpanReport gamma_dir = gamma_direction_rank(lb.mi, lb.body, 0.4, 1.1, grid);
  const SpanReport so3 = so3_span_probe(grid);

  const bool flagged = k_span.flagged_insufficient || gamma_span.flagged_insufficient ||
                       gamma_dir.flagged_insufficient || so3.flagged_insufficient;
  const bool pass = !flagged && k_span.rank == 3 && gamma_span.rank == 3 && gamma_dir.rank == 3 &&
                    so3.rank == 3;
  emit_json(o, {{"meta", run_meta(o.seed, lb.body.hash(), o.command_line)},
                {"grid", grid},
                {"K_rank", k_span.rank},
                {"gamma_span_rank", gamma_span.rank},
                {"gamma_direction_rank", gamma_dir.rank},
                {"so3_rank", so3.rank},
                {"singular_values",
                 {{"K", k_span.singular_values},
                  {"gamma", gamma_span.singular_values},
                  {"gamma_direction", gamma_dir.singular_values},
                  {"so3", so3.singular_values}}},
                {"flagged_insufficient", flagged},
                {"pass", pass}});
  return pass ? 0 : 1;
}

int cmd_invariants(const Options& o) {
  require_format(o, {"json"});
  if (o.sphere_mode) {
    const int n = o.samples > 0 ? o.samples : 1000;
    const SphereNullspaceResult res = nullspace_solve_sphere(n, o.seed);
    const bool pass = res.dimension == 5 && !res.inconclusive;
    json j = to_json(res);
    j["meta"] = run_meta(o.seed, "none", o.command_line);
    j["expected_dimension"] = 5;
    j["pass"] = pass;
    emit_json(o, j);
    return pass ? 0 : 1;
  }
  const LoadedBody lb = load_body(o.body_path);
  const BasisSpec spec{o.fourier, o.cross};
  const int n = o.samples > 0 ? o.samples : 20 * spec.size();
  const NullspaceResult res = nullspace_solve(family_of(o), lb.mi, lb.body, spec, n, o.seed);
  const int expected = (2 * o.fourier + 1) + 3;
  const bool pass = res.dimension == expected && !res.inconclusive;
  json j = to_json(res);
  j["meta"] = run_meta(o.seed, lb.body.hash(), o.command_line);
  j["expected_dimension"] = expected;
  j["pass"] = pass;
  emit_json(o, j);
  return pass ? 0 : 1;
}

int cmd_sphere_suite(const Options& o) {
  require_format(o, {"json"});
  const int n = o.samples > 0 ? o.samples : 10000;
  const int grid = o.grid > 0 ? o.grid : 8;

  // frozen example: reflection across e1 sends v = e1 to vbar
  Vec6 v0 = Vec6::Zero();
  v0[0] = 1;
  Vec6 expect = Vec6::Zero();
  expect[3] = 1;
  const double frozen = (sigma_sphere(Vec3::UnitX()) * v0 - expect).norm();

  auto g = derived_rng(o.seed, 59, 0);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ue(0.05, 4.0);
  auto rand_unit = [&] { return Vec3{nd(g), nd(g), nd(g)}.normalized(); };

  double det_worst = 0, ortho_worst = 0, cons_worst = 0, intertwine_worst = 0;
  for (int i = 0; i < n; ++i) {
    const Vec3 nvec = rand_unit();
    if (i < 2000) {
      Mat6 S = sigma_sphere(nvec);
      if (o.corrupt_nu) {
        Vec6 nu;  // negative control: forgotten 1/sqrt(2) normalization
        nu << nvec, -nvec;
        S = Mat6::Identity() - 2.0 * nu * nu.transpose();
      }
      det_worst = std::max(det_worst, std::abs(S.determinant() + 1.0));
      ortho_worst =
          std::max(ortho_worst, (S.transpose() * S - Mat6::Identity()).norm());
      Vec6 V;
      for (int k = 0; k < 6; ++k) V[k] = nd(g);
      const Vec6 W = S * V;
      cons_worst = std::max(
          cons_worst, (W.head<3>() + W.tail<3>() - V.head<3>() - V.tail<3>()).norm());
      cons_worst = std::max(cons_worst, std::abs(W.squaredNorm() - V.squaredNorm()));
    }
    const Vec3 p{nd(g), nd(g), nd(g)};
    const double e = std::sqrt(0.5 * p.squaredNorm() + ue(g));
    intertwine_worst = std::max(intertwine_worst, intertwine_sphere(e, p, rand_unit(), nvec));
  }
  const SpanReport so3 = so3_span_probe(grid);

  const bool pass = frozen <= 1e-12 && det_worst <= 1e-9 && ortho_worst <= 1e-12 &&
                    cons_worst <= 1e-9 && intertwine_worst <= 1e-10 && so3.rank == 3 &&
                    !so3.flagged_insufficient;
  emit_json(o, {{"meta", run_meta(o.seed, "none", o.command_line)},
                {"samples", n},
                {"frozen_example_residual", frozen},
                {"max_det_residual", det_worst},
                {"max_orthogonality_residual", ortho_worst},
                {"max_conservation_residual", cons_worst},
                {"max_intertwine_residual", intertwine_worst},
                {"so3_rank", so3.rank},
                {"corrupt_nu", o.corrupt_nu},
                {"pass", pass}});
  return pass ? 0 : 1;
}

int cmd_simulate(const Options& o) {
  require_format(o, {"csv"});
  const LoadedBody lb = load_body(o.body_path);
  ParticleState init;
  init.x_bar = Vec2{3.0, o.impact};
  init.V << 1, 0, -1, 0, 0, 0;
  const SimulationResult res =
      simulate(lb.body, lb.mi, init, family_of(o), o.horizon);

  const Mat6 M = mass_matrix(lb.mi);
  bool conserved = res.min_gap >= -1e-9;
  std::string s = csv_meta(o, lb.body.hash());
  s += "t,psi,theta,theta_bar,pre_v1,pre_v2,pre_vbar1,pre_vbar2,pre_omega,pre_omega_bar,"
       "post_v1,post_v2,post_vbar1,post_vbar2,post_omega,post_omega_bar,flags,dp1,dp2,denergy\n";
  for (std::size_t k = 0; k < res.events.size(); ++k) {
    const TrajectoryEvent& ev = res.events[k];
    const Vec6 dV = ev.V_post - ev.V_pre;
    const double dp1 = lb.mi.m * (dV[0] + dV[2]);
    const double dp2 = lb.mi.m * (dV[1] + dV[3]);
    const double e_pre = (M * ev.V_pre).squaredNorm();
    const double de = (M * ev.V_post).squaredNorm() - e_pre;
    conserved = conserved && std::abs(dp1) <= 1e-10 && std::abs(dp2) <= 1e-10 &&
                std::abs(de) <= 1e-9 * std::max(1.0, e_pre);
    s += csv_num(ev.t_event) + "," + csv_num(ev.beta_at_contact.psi) + "," +
         csv_num(ev.beta_at_contact.theta) + "," + csv_num(ev.beta_at_contact.theta_bar);
    for (int i = 0; i < 6; ++i) s += "," + csv_num(ev.V_pre[i]);
    for (int i = 0; i < 6; ++i) s += "," + csv_num(ev.V_post[i]);
    std::string flags;
    if (ev.grazing) flags = "grazing";
    if (res.truncated && k + 1 == res.events.size())
      flags += flags.empty() ? "truncated" : ";truncated";
    s += "," + flags + "," + csv_num(dp1) + "," + csv_num(dp2) + "," + csv_num(de) + "\n";
  }
  emit(o, s);
  return conserved ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  for (int i = 0; i < argc; ++i) o.command_line += std::string(i ? " " : "") + argv[i];

  CLI::App app{"verification laboratory for 2D hard-particle scattering"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool needs_body) {
    auto* b = sub->add_option("--body", o.body_path, "body descriptor JSON file");
    if (needs_body) b->required();
    sub->add_option("--family", o.family_str, "canonical|noncanonical");
    sub->add_option("--samples", o.samples, "sample count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--grid", o.grid, "grid size")->check(CLI::PositiveNumber);
    sub->add_option("--fourier", o.fourier, "Fourier order of the candidate basis")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--cross", o.cross, "include Fourier x monomial cross terms");
    sub->add_option("--out", o.out_path, "output path (default stdout)");
    sub->add_option("--format", o.format, "json|csv");
  };

  int rc = 0;
  auto* docd_cmd = app.add_subcommand("docd", "distance of closest approach over a psi grid");
  add_common(docd_cmd, true);
  docd_cmd->callback([&] { rc = cmd_docd(o); });

  auto* verify_cmd = app.add_subcommand("verify", "physical-scattering certificate at sampled beta");
  add_common(verify_cmd, true);
  verify_cmd->add_option("--tolerance", o.tolerance, "override all residual bounds");
  verify_cmd->callback([&] { rc = cmd_verify(o); });

  auto* lie_cmd = app.add_subcommand("lie", "generator span ranks over an orientation grid");
  add_common(lie_cmd, true);
  lie_cmd->callback([&] { rc = cmd_lie(o); });

  auto* inv_cmd = app.add_subcommand("invariants", "collision-invariant nullspace solve");
  add_common(inv_cmd, false);
  inv_cmd->add_flag("--sphere", o.sphere_mode, "hard-sphere mode (ignores --body/--family)");
  inv_cmd->callback([&] {
    if (!o.sphere_mode && o.body_path.empty())
      throw CLI::RequiredError("--body (or --sphere)");
    rc = cmd_invariants(o);
  });

  auto* sph_cmd = app.add_subcommand("sphere-suite", "hard-sphere scattering checks");
  add_common(sph_cmd, false);
  sph_cmd->add_flag("--corrupt-nu", o.corrupt_nu,
                    "negative control: drop the reflection normalization");
  sph_cmd->callback([&] { rc = cmd_sphere_suite(o); });

  auto* sim_cmd = app.add_subcommand("simulate", "two-particle event-driven trajectory");
  add_common(sim_cmd, true);
  sim_cmd->add_option("--horizon", o.horizon, "simulation end time")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--impact", o.impact, "vertical offset of the second centre");
  sim_cmd->callback([&] { rc = cmd_simulate(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
