#pragma once

// Bundled worked models: the Kummer map t -> t^n on the projective line and
// an unramified cyclic cover of a Tate curve.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "berkskel/different.hpp"
#include "berkskel/error.hpp"
#include "berkskel/morphism.hpp"
#include "berkskel/profile.hpp"
#include "berkskel/rational.hpp"
#include "berkskel/skeleton.hpp"

namespace berkskel {

struct Model {
  ResidueCharacteristic p;
  std::map<std::string, LogValue> logs;  // declared log-values, e.g. v_p
  SkeletalMorphism morphism;
  DifferentData different;
  ProfileField field;
};

// Exponent of p in n (0 when p = 0).
inline std::int64_t p_adic_exponent(ResidueCharacteristic p, std::int64_t n) {
  std::int64_t k = 0;
  for (std::int64_t q = p.power_part(n); q > 1; q /= static_cast<std::int64_t>(p.value())) ++k;
  return k;
}

/// t -> t^n with v(p) = v_p. The different is constant v_p(n) * v(p) on the
/// skeleton; the profile is a tower of one degree-p step per factor p of n.
inline Model kummer_model(std::int64_t n, ResidueCharacteristic p, const Rational& v_p) {
  if (v_p <= 0 && !p.is_zero()) fail(ErrorKind::InvalidArgument, "v(p) must be positive");
  Model model;
  model.p = p;
  if (!p.is_zero()) model.logs.emplace("v_p", LogValue(v_p));
  model.morphism = make_kummer(n);
  std::int64_t k = p_adic_exponent(p, n);
  Rational value = p.is_zero() ? Rational(0) : k * v_p;
  DifferentData& d = model.different;
  d.vertex_value["gauss"] = LogValue(value);
  d.inseparability_degree["gauss"] = p.power_part(n);
  d.generic_flag["gauss"] = true;
  for (const auto& [id, e] : model.morphism.source.edges()) {
    d.edge_profile[id] = PiecewiseAffine::affine(value, 0);
    d.listed_branches["gauss"].push_back({GermKind::skeleton_edge, {id, 0}, n, 0});
  }
  std::vector<ProfileFunction> steps;
  for (std::int64_t i = 0; i < k; ++i) steps.push_back(profile_degree_p(p, LogValue(v_p)));
  model.field = constant_field(model.morphism.source, compose_tower(steps));
  return model;
}

/// Unramified degree-m cover of a genus-0 loop of log-length L by an m-cycle
/// of edges of length L (the cover of a Tate curve by its m-isogenous one).
inline Model tate_model(std::int64_t m, const Rational& length, ResidueCharacteristic p = {}) {
  if (m < 1) fail(ErrorKind::InvalidArgument, "cover degree must be positive");
  if (length <= 0) fail(ErrorKind::InvalidArgument, "loop length must be positive");
  Model model;
  model.p = p;
  SkeletalMorphism& f = model.morphism;
  f.target.add_vertex({"x", 2, 0});
  f.target.add_edge({"loop", "x", "x", LogValue(length)});
  auto vertex_id = [](std::int64_t i) { return "y" + std::to_string(i); };
  for (std::int64_t i = 0; i < m; ++i) f.source.add_vertex({vertex_id(i), 2, 0});
  for (std::int64_t i = 0; i < m; ++i) {
    std::string e = "c" + std::to_string(i);
    f.source.add_edge({e, vertex_id(i), vertex_id((i + 1) % m), LogValue(length)});
    f.edge_map[e] = {"loop", false};
    f.edge_multiplicity[e] = 1;
  }
  for (std::int64_t i = 0; i < m; ++i) {
    f.vertex_map[vertex_id(i)] = "x";
    f.vertex_multiplicity[vertex_id(i)] = 1;
  }
  f.degree = m;
  DifferentData& d = model.different;
  for (const auto& [id, v] : f.source.vertices()) {
    d.vertex_value[id] = LogValue(0);
    d.generic_flag[id] = true;
    for (const auto& s : f.source.slots_at(id)) d.listed_branches[id].push_back({GermKind::skeleton_edge, s, 1, 0});
  }
  for (const auto& [id, e] : f.source.edges()) d.edge_profile[id] = PiecewiseAffine::affine(0, 0);
  model.field = constant_field(f.source, ProfileFunction::identity());
  return model;
}

}  // namespace berkskel
