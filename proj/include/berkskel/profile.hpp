#pragma once

// Profile (Herbrand) functions of finite morphisms along generic intervals,
// their families over a skeleton, and the radial multiplicity loci they
// describe.
//
// Direction convention: a profile maps source-side depth to target-side
// depth, with depth 0 at the skeleton. Its slope at a depth is the local
// multiplicity there, so slopes start at the largest multiplicity and
// decrease outward.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "berkskel/different.hpp"
#include "berkskel/error.hpp"
#include "berkskel/morphism.hpp"
#include "berkskel/pm_function.hpp"
#include "berkskel/rational.hpp"
#include "berkskel/report.hpp"
#include "berkskel/skeleton.hpp"

namespace berkskel {

/// Profile of a degree-p step with log-different v_delta: slope p up to
/// depth v_delta / (p - 1), then l + v_delta.
inline ProfileFunction profile_degree_p(ResidueCharacteristic p, const LogValue& v_delta) {
  if (v_delta.is_infinite()) fail(ErrorKind::InfiniteSlope, "degree-p profile of an inseparable step");
  if (p.is_zero()) {
    if (v_delta.value() != 0) fail(ErrorKind::InvalidArgument, "no wild steps in characteristic 0");
    return ProfileFunction::identity();
  }
  Rational pp(static_cast<std::int64_t>(p.value()));
  return ProfileFunction({pp, Rational(1)}, {v_delta.value() / (pp - 1)});
}

// Tame generic intervals carry multiplicity 1.
inline ProfileFunction profile_tame() { return ProfileFunction::identity(); }

/// Steps listed in the Y -> X direction: [phi_f, phi_g] gives phi_g o phi_f.
inline ProfileFunction compose_tower(const std::vector<ProfileFunction>& steps) {
  ProfileFunction result;
  for (const auto& step : steps) result = compose(step, result);
  return result;
}

struct FiltrationJump {
  Rational depth;
  std::int64_t order = 1;

  friend bool operator==(const FiltrationJump&, const FiltrationJump&) = default;
};

/// Lower ramification filtration: the group at depth u has order
/// jumps[i].order for jumps[i-1].depth < u <= jumps[i].depth, and is trivial
/// beyond the last jump.
struct RamificationFiltration {
  std::vector<FiltrationJump> jumps;
};

inline void require_valid(const RamificationFiltration& F, ResidueCharacteristic p) {
  for (std::size_t i = 0; i < F.jumps.size(); ++i) {
    const auto& j = F.jumps[i];
    if (j.depth < 0) fail(ErrorKind::InvalidFiltration, "negative jump depth");
    if (j.order <= 1 || !p.is_power(j.order)) {
      fail(ErrorKind::InvalidFiltration, "order " + std::to_string(j.order) + " is not a nontrivial power of p");
    }
    if (i > 0 && (j.depth <= F.jumps[i - 1].depth || j.order >= F.jumps[i - 1].order)) {
      fail(ErrorKind::InvalidFiltration, "depths must increase and orders decrease strictly");
    }
  }
}

/// Log-different of a filtration: the integral of (|G_u| - 1) du.
///
/// This is the normalization used throughout: lower-numbering depth is
/// source log-depth and the group order is the slope. It reproduces
/// profile_degree_p on one jump (break u, v_delta = (p - 1) u) and the
/// composition of degree-p steps on towers.
inline Rational log_different(const RamificationFiltration& F) {
  Rational total = 0;
  Rational start = 0;
  for (const auto& j : F.jumps) {
    total += (j.order - 1) * (j.depth - start);
    start = j.depth;
  }
  return total;
}

/// Herbrand function scaled to the profile normalization: the integral of
/// |G_u| du, with slopes the group orders and breaks at the jumps.
inline ProfileFunction herbrand_from_filtration(const RamificationFiltration& F, ResidueCharacteristic p) {
  require_valid(F, p);
  std::vector<Rational> slopes;
  std::vector<Rational> breaks;
  for (const auto& j : F.jumps) {
    slopes.emplace_back(j.order);
    breaks.push_back(j.depth);
  }
  slopes.emplace_back(1);
  return ProfileFunction(std::move(slopes), std::move(breaks));
}

/// Splits a morphism profile into degree-p steps (Y -> X order) whose tower
/// composes back to it. The lowest step breaks where the profile reaches
/// slope 1.
inline std::vector<ProfileFunction> split_into_degree_p_steps(ProfileFunction f, ResidueCharacteristic p) {
  if (!is_morphism_profile(f, p)) fail(ErrorKind::InvalidFunction, "not a morphism profile: " + format_pm(f));
  if (f.terminal_slope() != 1) fail(ErrorKind::TerminalSlopeNotOne, format_pm(f));
  std::vector<ProfileFunction> steps;
  while (!f.is_identity()) {
    const Rational& b = f.breaks().back();
    auto step = profile_degree_p(p, LogValue(b * (static_cast<std::int64_t>(p.value()) - 1)));
    steps.push_back(step);
    f = compose(f, inverse(step));
  }
  return steps;
}

inline std::int64_t require_integral_slope(const Rational& s) {
  if (!is_integer(s)) fail(ErrorKind::InvalidFunction, "multiplicity " + format_rational(s) + " is not an integer");
  return to_int64(s);
}

/// Multiplicity at a depth: the right slope at 0, elsewhere the left slope.
/// At a break the larger (inner) multiplicity applies, matching the closed
/// loci N_{f,>=d}.
inline std::int64_t multiplicity_at(const ProfileFunction& f, const LogValue& depth) {
  if (depth.is_infinite()) fail(ErrorKind::OutOfRange, "multiplicity at inf");
  Side side = depth.value() == 0 ? Side::right : Side::left;
  return require_integral_slope(f.function().slope_at(depth.value(), side));
}

/// Largest depth at which the multiplicity is >= d: nullopt for the empty
/// set, inf when the terminal slope is >= d. Works for any d; with p-power
/// slopes this equals the threshold of the smallest p-power >= d.
inline std::optional<LogValue> locus_threshold(const ProfileFunction& f, const Rational& d) {
  const auto& s = f.slopes();
  if (s[0] < d) return std::nullopt;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] < d) return LogValue(f.breaks()[i - 1]);
  }
  return LogValue::infinity();
}

/// Threshold of N_{f,>=d} for every slope d occurring in f, plus d = 1.
inline std::map<std::int64_t, LogValue> radii_of_loci(const ProfileFunction& f, ResidueCharacteristic p) {
  if (!is_morphism_profile(f, p)) fail(ErrorKind::InvalidFunction, "slopes are not non-increasing powers of p");
  std::map<std::int64_t, LogValue> out;
  for (const auto& s : f.slopes()) out.emplace(to_int64(s), *locus_threshold(f, s));
  out[1] = LogValue::infinity();
  return out;
}

// c + r * s, where s is the position along an edge measured from its base
// endpoint.
struct AffineInPosition {
  Rational constant;
  Rational rate;

  Rational at(const Rational& s) const { return constant + rate * s; }

  friend bool operator==(const AffineInPosition&, const AffineInPosition&) = default;
};

inline AffineInPosition operator+(const AffineInPosition& a, const AffineInPosition& b) {
  return {a.constant + b.constant, a.rate + b.rate};
}
inline AffineInPosition operator-(const AffineInPosition& a, const AffineInPosition& b) {
  return {a.constant - b.constant, a.rate - b.rate};
}
inline AffineInPosition operator*(const Rational& k, const AffineInPosition& a) {
  return {k * a.constant, k * a.rate};
}

// a <= b on [0, length], or on [0, inf) when length is nullopt.
inline bool leq_on(const AffineInPosition& a, const AffineInPosition& b, const std::optional<Rational>& length) {
  if (a.constant > b.constant) return false;
  return length ? a.at(*length) <= b.at(*length) : a.rate <= b.rate;
}

/// Profiles along an edge: at position s the profile has breaks
/// break_curves[i](s) and slopes `slopes`; region i lies between
/// break_curves[i-1] and break_curves[i] with slope slopes[i].
struct EdgeFamily {
  std::vector<AffineInPosition> break_curves;
  std::vector<Rational> slopes;

  ProfileFunction at(const Rational& s) const {
    std::vector<Rational> breaks;
    for (const auto& c : break_curves) breaks.push_back(c.at(s));
    return ProfileFunction(slopes, std::move(breaks));
  }

  friend bool operator==(const EdgeFamily&, const EdgeFamily&) = default;
};

struct ProfileField {
  std::map<std::string, ProfileFunction> vertex_profiles;  // type-2 vertices
  std::map<std::string, EdgeFamily> edge_families;

  friend bool operator==(const ProfileField&, const ProfileField&) = default;
};

inline ProfileField constant_field(const SkeletonGraph& g, const ProfileFunction& f) {
  ProfileField field;
  for (const auto& [id, v] : g.vertices()) {
    if (v.point_type == 2) field.vertex_profiles[id] = f;
  }
  EdgeFamily family;
  for (const auto& b : f.breaks()) family.break_curves.push_back({b, 0});
  family.slopes = f.slopes();
  for (const auto& [id, e] : g.edges()) field.edge_families[id] = family;
  return field;
}

inline ValidationReport validate_field(const SkeletonGraph& g, const ProfileField& field, ResidueCharacteristic p) {
  ValidationReport report;
  for (const auto& [id, v] : g.vertices()) {
    if (v.point_type != 2) continue;
    auto it = field.vertex_profiles.find(id);
    if (it == field.vertex_profiles.end()) {
      report.error("field.vertex_profile", {id}, "no profile at type-2 vertex");
    } else if (!is_morphism_profile(it->second, p)) {
      report.error("field.vertex_profile", {id}, "slopes are not non-increasing powers of p: " + format_pm(it->second));
    }
  }
  for (const auto& [id, f] : field.vertex_profiles) {
    if (!g.has_vertex(id) || g.vertex(id).point_type != 2) {
      report.error("field.vertex_profile", {id}, "profile given at a non-type-2 vertex");
    }
  }
  for (const auto& [id, e] : g.edges()) {
    auto it = field.edge_families.find(id);
    if (it == field.edge_families.end()) {
      report.error("field.edge_family", {id}, "no profile family along edge");
      continue;
    }
    const EdgeFamily& fam = it->second;
    if (fam.slopes.size() != fam.break_curves.size() + 1) {
      report.error("field.edge_family", {id}, "need one more slope than break curves");
      continue;
    }
    bool slopes_ok = true;
    for (std::size_t i = 0; i < fam.slopes.size(); ++i) {
      if (!p.is_power(fam.slopes[i]) || (i > 0 && fam.slopes[i] > fam.slopes[i - 1])) slopes_ok = false;
    }
    if (!slopes_ok) report.error("field.edge_family", {id}, "region slopes are not non-increasing powers of p");
    auto length = finite_length(e);
    AffineInPosition previous{0, 0};
    bool ordered = true;
    for (const auto& c : fam.break_curves) {
      if (!leq_on(previous, c, length)) ordered = false;
      previous = c;
    }
    if (!ordered) {
      report.error("field.edge_family", {id}, "break curves leave the order 0 <= c1 <= c2 <= ... along the edge");
      continue;
    }
    auto check_end = [&](const std::string& v, const Rational& s) {
      auto vp = field.vertex_profiles.find(v);
      if (vp == field.vertex_profiles.end()) return;
      ProfileFunction here = fam.at(s);
      if (!(here == vp->second)) {
        report.identity_failed("field.continuity", {id, v}, "edge family disagrees with the vertex profile",
                               format_pm(here), format_pm(vp->second));
      }
    };
    check_end(base_endpoint(g, e), 0);
    if (length && g.vertex(far_endpoint(g, e)).point_type == 2) check_end(far_endpoint(g, e), *length);
  }
  return report;
}

inline Rational position_on_edge(const SkeletonGraph& g, const SkeletonPoint& normalized) {
  (void)g;
  return normalized.depth;
}

/// Profile at a skeleton point. Edge points are evaluated from the region
/// data; the edge is first checked against its endpoint profiles.
inline ProfileFunction evaluate_field(const SkeletonGraph& g, const ProfileField& field, const SkeletonPoint& q) {
  SkeletonPoint where = locate(g, q);
  if (where.is_vertex()) {
    if (g.vertex(where.id).point_type != 2) fail(ErrorKind::InvalidField, "no profile at type-1 vertex " + where.id);
    auto it = field.vertex_profiles.find(where.id);
    if (it == field.vertex_profiles.end()) fail(ErrorKind::InvalidField, "no profile at vertex " + where.id);
    return it->second;
  }
  auto it = field.edge_families.find(where.id);
  if (it == field.edge_families.end()) fail(ErrorKind::InvalidField, "no family along edge " + where.id);
  const Edge& e = g.edge(where.id);
  auto matches = [&](const std::string& v, const Rational& s) {
    auto vp = field.vertex_profiles.find(v);
    return vp == field.vertex_profiles.end() || it->second.at(s) == vp->second;
  };
  auto length = finite_length(e);
  if (!matches(base_endpoint(g, e), 0) ||
      (length && g.vertex(far_endpoint(g, e)).point_type == 2 && !matches(far_endpoint(g, e), *length))) {
    fail(ErrorKind::DiscontinuousField, "family along " + e.id + " does not meet its endpoint profiles");
  }
  return it->second.at(where.depth);
}

// Log-different recovered from a field by applying the character pointwise.
struct DifferentView {
  std::map<std::string, Rational> vertex_value;
  std::map<std::string, PiecewiseAffine> edge_profile;
};

/// Character of the family along an edge: sum over bounded regions of
/// (slope - 1) * width, which is affine in the position.
inline AffineInPosition family_character(const EdgeFamily& fam) {
  if (fam.slopes.back() != 1) {
    fail(ErrorKind::TerminalSlopeNotOne, "terminal region slope " + format_rational(fam.slopes.back()));
  }
  AffineInPosition total{0, 0};
  AffineInPosition previous{0, 0};
  for (std::size_t i = 0; i < fam.break_curves.size(); ++i) {
    total = total + (fam.slopes[i] - 1) * (fam.break_curves[i] - previous);
    previous = fam.break_curves[i];
  }
  return total;
}

inline DifferentView reconstruct_delta(const SkeletonGraph& g, const ProfileField& field) {
  DifferentView view;
  for (const auto& [id, f] : field.vertex_profiles) view.vertex_value[id] = character(f);
  for (const auto& [id, fam] : field.edge_families) {
    if (!g.has_edge(id)) continue;
    AffineInPosition c = family_character(fam);
    view.edge_profile[id] = PiecewiseAffine::affine(c.constant, c.rate);
  }
  return view;
}

// Exact agreement of a reconstructed view with supplied different data.
inline bool matches(const SkeletonGraph& g, const DifferentView& view, const DifferentData& d) {
  for (const auto& [id, v] : view.vertex_value) {
    auto it = d.vertex_value.find(id);
    if (it == d.vertex_value.end() || it->second.is_infinite() || it->second.value() != v) return false;
  }
  for (const auto& [id, f] : view.edge_profile) {
    auto it = d.edge_profile.find(id);
    if (it == d.edge_profile.end() || !equal_on(f, it->second, finite_length(g.edge(id)))) return false;
  }
  return view.vertex_value.size() == d.vertex_value.size();
}

/// For a degree-p morphism the different determines the profile: the break
/// sits at v_delta / (p - 1). The log-different must be affine on each edge.
inline ProfileField field_from_different(const SkeletalMorphism& m, const DifferentData& d, ResidueCharacteristic p) {
  if (p.is_zero() || m.degree != static_cast<std::int64_t>(p.value())) {
    fail(ErrorKind::InvalidArgument, "the different determines the profile only for degree-p morphisms");
  }
  Rational pm1(static_cast<std::int64_t>(p.value()) - 1);
  ProfileField field;
  for (const auto& [id, v] : d.vertex_value) field.vertex_profiles[id] = profile_degree_p(p, v);
  for (const auto& [id, f] : d.edge_profile) {
    auto length = finite_length(m.source.edge(id));
    for (const auto& b : f.breaks()) {
      if (!length || b < *length) fail(ErrorKind::InvalidField, "log-different along " + id + " is not affine");
    }
    field.edge_families[id] = {{{f.initial_value() / pm1, f.slopes()[0] / pm1}},
                               {Rational(static_cast<std::int64_t>(p.value())), Rational(1)}};
  }
  return field;
}

/// Pointwise composition phi_outer(f(q)) o phi_inner(q) for f: Y -> Z, with
/// `inner` on Y and `outer` on Z. Along an edge the new breaks are the inner
/// breaks plus inner-preimages of the outer breaks; all of them must stay in
/// one order across the edge, otherwise the edge needs subdividing first and
/// DiscontinuousField is raised.
inline ProfileField compose_fields(const ProfileField& outer, const ProfileField& inner, const SkeletalMorphism& f) {
  ProfileField out;
  for (const auto& [y, phi] : inner.vertex_profiles) {
    auto it = outer.vertex_profiles.find(f.image_vertex(y));
    if (it == outer.vertex_profiles.end()) fail(ErrorKind::InvalidField, "no outer profile over " + y);
    out.vertex_profiles[y] = compose(it->second, phi);
  }
  for (const auto& [e_id, fam] : inner.edge_families) {
    const Edge& e = f.source.edge(e_id);
    const EdgeImage& image = f.image_edge(e_id);
    const Edge& h = f.target.edge(image.edge);
    auto outer_it = outer.edge_families.find(h.id);
    if (outer_it == outer.edge_families.end()) fail(ErrorKind::InvalidField, "no outer family along " + h.id);
    const EdgeFamily& ofam = outer_it->second;
    auto length = finite_length(e);
    Rational n(f.n_edge(e_id));
    // Target position as a function of the source position.
    bool aligned = (base_slot(f.source, e) ^ static_cast<int>(image.reversed)) == base_slot(f.target, h);
    AffineInPosition t = aligned ? AffineInPosition{0, n} : AffineInPosition{h.length.value(), -n};
    auto substitute = [&](const AffineInPosition& c) { return AffineInPosition{c.at(t.constant), c.rate * t.rate}; };
    // Values of the inner profile at its break curves.
    std::vector<AffineInPosition> lower{{0, 0}};
    std::vector<AffineInPosition> value{{0, 0}};
    for (std::size_t i = 0; i < fam.break_curves.size(); ++i) {
      value.push_back(value.back() + fam.slopes[i] * (fam.break_curves[i] - lower.back()));
      lower.push_back(fam.break_curves[i]);
    }
    struct Curve {
      AffineInPosition c;
      bool from_outer;
    };
    std::vector<Curve> curves;
    for (const auto& c : fam.break_curves) curves.push_back({c, false});
    for (const auto& oc : ofam.break_curves) {
      AffineInPosition y = substitute(oc);
      std::optional<std::size_t> piece;
      for (std::size_t i = 0; i < value.size() && !piece; ++i) {
        bool above = leq_on(value[i], y, length);
        bool below = i + 1 == value.size() || leq_on(y, value[i + 1], length);
        if (above && below) piece = i;
      }
      if (!piece) fail(ErrorKind::DiscontinuousField, "outer break crosses an inner break along " + e_id);
      curves.push_back({lower[*piece] + (1 / fam.slopes[*piece]) * (y - value[*piece]), true});
    }
    std::stable_sort(curves.begin(), curves.end(), [&](const Curve& a, const Curve& b) {
      Rational a_end = length ? a.c.at(*length) : a.c.rate;
      Rational b_end = length ? b.c.at(*length) : b.c.rate;
      return a.c.constant < b.c.constant || (a.c.constant == b.c.constant && a_end < b_end);
    });
    for (std::size_t i = 1; i < curves.size(); ++i) {
      if (!leq_on(curves[i - 1].c, curves[i].c, length)) {
        fail(ErrorKind::DiscontinuousField, "composite break curves cross along " + e_id);
      }
    }
    EdgeFamily composite;
    std::size_t inner_index = 0;
    std::size_t outer_index = 0;
    composite.slopes.push_back(fam.slopes[0] * ofam.slopes[0]);
    for (const auto& c : curves) {
      (c.from_outer ? outer_index : inner_index) += 1;
      composite.break_curves.push_back(c.c);
      composite.slopes.push_back(fam.slopes[inner_index] * ofam.slopes[outer_index]);
    }
    out.edge_families[e_id] = std::move(composite);
  }
  return out;
}

/// Threshold of a radial set along one edge: empty, everything, or the depth
/// given by an affine curve (a zero value means the empty set at that point).
struct EdgeThreshold {
  enum class Kind { empty, finite, infinite };
  Kind kind = Kind::empty;
  AffineInPosition curve;

  friend bool operator==(const EdgeThreshold&, const EdgeThreshold&) = default;
};

/// Radial set {x : depth(x) <= threshold(retraction(x))}; nullopt thresholds
/// stand for the empty set over that point.
struct RadialSet {
  Rational degree;
  std::map<std::string, std::optional<LogValue>> vertex_threshold;
  std::map<std::string, EdgeThreshold> edge_threshold;
};

inline std::optional<LogValue> threshold_at(const EdgeThreshold& t, const Rational& s) {
  switch (t.kind) {
    case EdgeThreshold::Kind::empty: return std::nullopt;
    case EdgeThreshold::Kind::infinite: return LogValue::infinity();
    case EdgeThreshold::Kind::finite: break;
  }
  Rational value = t.curve.at(s);
  if (value == 0) return std::nullopt;
  return LogValue(value);
}

/// Radial set N_{f,>=d} assembled from a validated field.
inline RadialSet build_radial_set(const SkeletonGraph& g, const ProfileField& field, const Rational& d,
                                  ResidueCharacteristic p) {
  if (d <= 0) fail(ErrorKind::InvalidArgument, "degree threshold must be positive");
  auto report = validate_field(g, field, p);
  if (!report.passed()) fail(ErrorKind::InvalidField, render(report));
  RadialSet set;
  set.degree = d;
  for (const auto& [id, f] : field.vertex_profiles) set.vertex_threshold[id] = locus_threshold(f, d);
  for (const auto& [id, fam] : field.edge_families) {
    EdgeThreshold t;
    std::size_t last = fam.slopes.size();
    for (std::size_t i = 0; i < fam.slopes.size(); ++i) {
      if (fam.slopes[i] >= d) last = i;
    }
    if (last == fam.slopes.size()) t.kind = EdgeThreshold::Kind::empty;
    else if (last + 1 == fam.slopes.size()) t.kind = EdgeThreshold::Kind::infinite;
    else t = {EdgeThreshold::Kind::finite, fam.break_curves[last]};
    if (t.kind == EdgeThreshold::Kind::finite && t.curve == AffineInPosition{0, 0}) t.kind = EdgeThreshold::Kind::empty;
    set.edge_threshold[id] = t;
    // Continuity with the endpoint thresholds.
    const Edge& e = g.edge(id);
    auto length = finite_length(e);
    std::vector<std::pair<std::string, Rational>> ends{{base_endpoint(g, e), 0}};
    if (length && g.vertex(far_endpoint(g, e)).point_type == 2) ends.emplace_back(far_endpoint(g, e), *length);
    for (const auto& [v, s] : ends) {
      if (threshold_at(t, s) != set.vertex_threshold.at(v)) {
        fail(ErrorKind::InvalidField, "radial threshold along " + id + " does not meet vertex " + v);
      }
    }
  }
  return set;
}

inline std::optional<LogValue> threshold_at(const SkeletonGraph& g, const RadialSet& set, const SkeletonPoint& q) {
  SkeletonPoint where = locate(g, q);
  if (where.is_vertex()) {
    auto it = set.vertex_threshold.find(where.id);
    if (it == set.vertex_threshold.end()) fail(ErrorKind::UnknownId, "no threshold at vertex " + where.id);
    return it->second;
  }
  auto it = set.edge_threshold.find(where.id);
  if (it == set.edge_threshold.end()) fail(ErrorKind::UnknownId, "no threshold along edge " + where.id);
  return threshold_at(it->second, where.depth);
}

/// Closed membership: depth <= threshold over the retraction point q.
inline bool radial_membership(const SkeletonGraph& g, const RadialSet& set, const SkeletonPoint& q,
                              const LogValue& depth) {
  auto t = threshold_at(g, set, q);
  return t && depth <= *t;
}

}  // namespace berkskel
