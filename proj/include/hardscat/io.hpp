#pragma once
// Body descriptor files and JSON report serialization.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hardscat/invariants.hpp"
#include "hardscat/scattering.hpp"
#include "hardscat/spheres.hpp"

namespace hardscat {

struct LoadedBody {
  ConvexBody2D body;
  MassInertia mi;           // uniform-density values unless overridden
  bool mass_override = false;
};

// {"type":"disk","r":..} | {"type":"polygon","vertices":[[x,y],..]} |
// {"type":"support_fourier","cos":[..],"sin":[..]}; optional "mass"/"inertia"
inline LoadedBody parse_body(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw std::invalid_argument("body descriptor: missing \"type\"");
  const std::string type = j.at("type").get<std::string>();
  ConvexBody2D body = [&] {
    if (type == "disk") return ConvexBody2D{Disk{j.at("r").get<double>()}};
    if (type == "polygon") {
      Polygon poly;
      for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 2)
          throw std::invalid_argument("body descriptor: vertices must be [x,y] pairs");
        poly.vertices.push_back(Vec2{v[0].get<double>(), v[1].get<double>()});
      }
      return ConvexBody2D{poly};
    }
    if (type == "support_fourier") {
      SupportFourier f;
      f.cos_c = j.at("cos").get<std::vector<double>>();
      if (j.contains("sin")) f.sin_c = j.at("sin").get<std::vector<double>>();
      return ConvexBody2D{f};
    }
    throw std::invalid_argument("body descriptor: unknown type \"" + type + "\"");
  }();

  LoadedBody out{body, body.mass_inertia(), false};
  if (j.contains("mass") || j.contains("inertia")) {
    out.mass_override = true;
    if (j.contains("mass")) out.mi.m = j.at("mass").get<double>();
    if (j.contains("inertia")) out.mi.J = j.at("inertia").get<double>();
    if (!(out.mi.m > 0) || !(out.mi.J > 0))
      throw std::invalid_argument("body descriptor: mass and inertia must be positive");
  }
  return out;
}

inline LoadedBody load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open body file: " + path);
  nlohmann::json j;
  in >> j;  // parse errors surface as nlohmann exceptions
  return parse_body(j);
}

// run provenance block attached to every tool output
inline nlohmann::json run_meta(std::uint64_t seed, const std::string& body_hash,
                               const std::string& command_line) {
  return {{"seed", seed},
          {"body_hash", body_hash},
          {"tool_version", kVersion},
          {"command", command_line}};
}

inline std::string csv_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline nlohmann::json to_json(const VerificationReport& r) {
  return {{"family", r.family},
          {"body_hash", r.body_hash},
          {"tool_version", r.tool_version},
          {"beta", {r.beta.psi, r.beta.theta, r.beta.theta_bar}},
          {"n_samples", r.n_samples},
          {"seed", r.seed},
          {"det_residual", r.det_residual},
          {"e1_residual", r.e1_residual},
          {"e2_residual", r.e2_residual},
          {"alpha_residual", r.alpha_residual},
          {"energy_rel_residual", r.energy_rel_residual},
          {"halfspace_worst", r.halfspace_worst},
          {"halfspace_checked", r.halfspace_checked},
          {"halfspace_violations", r.halfspace_violations},
          {"violated_samples", r.violated_samples},
          {"pass", r.pass}};
}

inline nlohmann::json to_json(const SpanReport& r) {
  return {{"rank", r.rank},
          {"singular_values", r.singular_values},
          {"gap", r.gap},
          {"threshold", r.threshold},
          {"sample_count", r.sample_count},
          {"flagged_insufficient", r.flagged_insufficient}};
}

namespace detail {

template <typename Result>
nlohmann::json nullspace_json_common(const Result& r) {
  std::vector<std::vector<double>> basis(r.basis_coefficients.cols());
  for (int c = 0; c < r.basis_coefficients.cols(); ++c)
    basis[c].assign(r.basis_coefficients.col(c).data(),
                    r.basis_coefficients.col(c).data() + r.basis_coefficients.rows());
  return {{"dimension", r.dimension},
          {"basis_coefficients", basis},
          {"singular_values", r.singular_values},
          {"sample_count", r.sample_count},
          {"seed", r.seed},
          {"gap", r.gap},
          {"inconclusive", r.inconclusive},
          {"validation_residuals", r.validation_residuals}};
}

}  // namespace detail

inline nlohmann::json to_json(const NullspaceResult& r) {
  nlohmann::json j = detail::nullspace_json_common(r);
  j["threshold"] = r.threshold;
  j["family"] = family_name(r.family);
  j["basis"] = {{"fourier_order", r.spec.fourier_order},
                {"cross_terms", r.spec.cross_terms},
                {"size", r.spec.size()}};
  return j;
}

inline nlohmann::json to_json(const SphereNullspaceResult& r) {
  nlohmann::json j = detail::nullspace_json_common(r);
  j["basis"] = {{"kind", "sphere"}, {"size", kSphereBasis}};
  return j;
}

}  // namespace hardscat
