#pragma once

// The different function on a skeleton: log-different values at vertices,
// piecewise-affine log-different along edges, and the finitely many branch
// germs at type-2 vertices that carry non-generic slopes.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "berkskel/error.hpp"
#include "berkskel/morphism.hpp"
#include "berkskel/pm_function.hpp"
#include "berkskel/rational.hpp"
#include "berkskel/report.hpp"
#include "berkskel/skeleton.hpp"

namespace berkskel {

enum class GermKind { skeleton_edge, off_skeleton };

/// A branch at a type-2 vertex with its multiplicity and the slope of the
/// different along it.
///
/// `slope` is the multiplicative slope of delta in the outward direction, the
/// convention in which a branch is delta-trivial iff slope == n - 1 (delta
/// grows with slope p - 1 off the skeleton of t -> t^p). Edge data is stored
/// as the log-different v = -log(delta), so the two differ by a sign; that
/// conversion lives only in germ_slope_from_log_slope.
struct BranchGerm {
  GermKind kind = GermKind::off_skeleton;
  EdgeSlot edge;  // meaningful for skeleton_edge germs
  std::int64_t n = 1;
  Rational slope{0};

  friend bool operator==(const BranchGerm&, const BranchGerm&) = default;
};

inline Rational germ_slope_from_log_slope(const Rational& outward_log_slope) { return -outward_log_slope; }

// Term of a branch in the wild balancing sum: -slope + n - 1.
inline Rational balancing_term(const BranchGerm& b) { return -b.slope + b.n - 1; }

inline bool is_delta_trivial(const BranchGerm& b) { return b.slope == b.n - 1; }

struct DifferentData {
  std::map<std::string, LogValue> vertex_value;             // type-2 vertices; inf = inseparable
  std::map<std::string, PiecewiseAffine> edge_profile;      // by depth from base_endpoint
  std::map<std::string, std::vector<BranchGerm>> listed_branches;
  std::map<std::string, std::int64_t> inseparability_degree;
  std::map<std::string, bool> generic_flag;                 // unlisted branches are trivial

  std::int64_t insep(const std::string& v) const {
    auto it = inseparability_degree.find(v);
    return it == inseparability_degree.end() ? 1 : it->second;
  }
  bool generic(const std::string& v) const {
    auto it = generic_flag.find(v);
    return it != generic_flag.end() && it->second;
  }

  friend bool operator==(const DifferentData&, const DifferentData&) = default;
};

// Outward slope of the log-different at the endpoint in `slot` of `e`.
inline Rational outward_log_slope(const SkeletonGraph& g, const Edge& e, int slot, const PiecewiseAffine& profile) {
  if (slot == base_slot(g, e)) return profile.slope_at(0, Side::right);
  auto length = finite_length(e);
  if (!length) fail(ErrorKind::InvalidArgument, "infinite edge " + e.id + " has no far type-2 end");
  return -profile.slope_at(*length, Side::left);
}

/// Continuity of the log-different along edges, nonnegativity, and agreement
/// of skeleton germs with the edge data they describe.
inline ValidationReport validate_different(const SkeletalMorphism& m, const DifferentData& d,
                                           ResidueCharacteristic p) {
  ValidationReport report;
  const SkeletonGraph& g = m.source;
  for (const auto& [id, v] : g.vertices()) {
    if (v.point_type != 2) continue;
    if (!d.vertex_value.count(id)) report.error("different.vertex_value", {id}, "no log-different at type-2 vertex");
    if (!p.is_power(d.insep(id))) {
      report.error("different.inseparability", {id}, "inseparability degree " + std::to_string(d.insep(id)) +
                                                          " is not a power of p");
    }
  }
  for (const auto& [id, value] : d.vertex_value) {
    if (!g.has_vertex(id) || g.vertex(id).point_type != 2) {
      report.error("different.vertex_value", {id}, "log-different given at a non-type-2 vertex");
    }
  }
  auto value_at = [&](const std::string& v) -> std::optional<LogValue> {
    auto it = d.vertex_value.find(v);
    if (it == d.vertex_value.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [id, e] : g.edges()) {
    const std::string& base = base_endpoint(g, e);
    const std::string& far = far_endpoint(g, e);
    auto base_value = value_at(base);
    auto far_value = g.vertex(far).point_type == 2 ? value_at(far) : std::nullopt;
    bool inseparable_end = (base_value && base_value->is_infinite()) || (far_value && far_value->is_infinite());
    auto it = d.edge_profile.find(id);
    if (it == d.edge_profile.end()) {
      if (!inseparable_end) report.error("different.edge_profile", {id}, "no log-different along edge");
      continue;
    }
    if (inseparable_end) {
      report.error("different.edge_profile", {id}, "edge at an inseparable vertex carries no finite profile");
      continue;
    }
    const PiecewiseAffine& f = it->second;
    auto length = finite_length(e);
    if (base_value && f(0) != base_value->value()) {
      report.identity_failed("different.continuity", {id, base}, "edge profile disagrees with vertex value",
                             format_rational(f(0)), base_value->str());
    }
    if (length && far_value && f(*length) != far_value->value()) {
      report.identity_failed("different.continuity", {id, far}, "edge profile disagrees with vertex value",
                             format_rational(f(*length)), far_value->str());
    }
    bool negative = f(0) < 0 || (length && f(*length) < 0) || (!length && f.terminal_slope() < 0);
    for (const auto& b : f.breaks()) {
      if ((!length || b < *length) && f(b) < 0) negative = true;
    }
    if (negative) report.error("different.nonnegative", {id}, "log-different becomes negative along edge");
  }
  for (const auto& [v, germs] : d.listed_branches) {
    if (!g.has_vertex(v) || g.vertex(v).point_type != 2) {
      report.error("different.germ", {v}, "branches listed at a non-type-2 vertex");
      continue;
    }
    std::set<EdgeSlot> seen;
    for (const auto& b : germs) {
      if (b.n < 1) report.error("different.germ", {v}, "branch multiplicity must be positive");
      if (b.kind == GermKind::off_skeleton) continue;
      if (!g.has_edge(b.edge.edge) || g.edge(b.edge.edge).endpoint(b.edge.slot) != v) {
        report.error("different.germ", {v, b.edge.edge}, "listed skeleton germ is not an edge germ at this vertex");
        continue;
      }
      if (!seen.insert(b.edge).second) report.error("different.germ", {v, b.edge.edge}, "skeleton germ listed twice");
      if (m.edge_multiplicity.count(b.edge.edge) && b.n != m.n_edge(b.edge.edge)) {
        report.identity_failed("different.germ_multiplicity", {v, b.edge.edge}, "germ multiplicity differs from n_e",
                               std::to_string(b.n), std::to_string(m.n_edge(b.edge.edge)));
      }
      auto profile = d.edge_profile.find(b.edge.edge);
      if (profile == d.edge_profile.end()) continue;
      const Edge& e = g.edge(b.edge.edge);
      if (!e.is_loop() && b.edge.slot != base_slot(g, e) && e.length.is_infinite()) continue;
      Rational expected = germ_slope_from_log_slope(outward_log_slope(g, e, b.edge.slot, profile->second));
      if (b.slope != expected) {
        report.identity_failed("different.germ_slope", {v, b.edge.edge}, "germ slope disagrees with the edge profile",
                               format_rational(b.slope), format_rational(expected));
      }
    }
  }
  return report;
}

/// 2g(y) - 2 - 2 n_y (g(x) - 1) against the sum of -slope + n - 1 over the
/// listed branches at y. Throws InfiniteSlope at inseparable vertices and
/// MissingSkeletonBranch when an edge germ at y is not listed.
inline IdentitySides wild_balance_sides(const SkeletalMorphism& m, const DifferentData& d, const std::string& y) {
  const Vertex& vy = m.source.vertex(y);
  if (vy.point_type != 2) fail(ErrorKind::InvalidArgument, "balancing is stated at type-2 vertices; " + y + " is type 1");
  auto value = d.vertex_value.find(y);
  if (value != d.vertex_value.end() && value->second.is_infinite()) {
    fail(ErrorKind::InfiniteSlope, "vertex " + y + " is inseparable (log-different inf)");
  }
  auto listed = d.listed_branches.find(y);
  std::set<EdgeSlot> present;
  if (listed != d.listed_branches.end()) {
    for (const auto& b : listed->second) {
      if (b.kind == GermKind::skeleton_edge) present.insert(b.edge);
    }
  }
  for (const auto& s : m.source.slots_at(y)) {
    if (!present.count(s)) {
      fail(ErrorKind::MissingSkeletonBranch, "edge germ " + s.edge + "/" + std::to_string(s.slot) + " at " + y +
                                                 " is not listed");
    }
  }
  const Vertex& vx = m.target.vertex(m.image_vertex(y));
  Rational lhs = 2 * vy.genus - 2 - 2 * m.n_vertex(y) * (vx.genus - 1);
  Rational rhs = 0;
  if (listed != d.listed_branches.end()) {
    for (const auto& b : listed->second) rhs += balancing_term(b);
  }
  return {lhs, rhs};
}

inline BalanceReport check_wild_balancing(const SkeletalMorphism& m, const DifferentData& d, const std::string& y) {
  BalanceReport report;
  auto sides = wild_balance_sides(m, d, y);
  if (!d.generic(y)) {
    report.error("different.generic_flag", {y}, "unlisted branches are not asserted trivial; the sum is incomplete");
  }
  if (!sides.holds()) {
    report.identity_failed("different.wild_balancing", {y}, "2g(y)-2-2n_y(g(x)-1) != sum(-slope+n-1)",
                           format_rational(sides.lhs), format_rational(sides.rhs));
  }
  return report;
}

struct Type1SlopeCheck {
  BalanceReport report;
  Rational terminal_slope;
  bool wild = false;     // terminal slope > 0
  bool skipped = false;  // ramified point lying on the skeleton
};

/// Compares the terminal slope of the log-different at a type-1 end with the
/// claimed classical log-different. Ramified type-1 vertices (n_v > 1) lie on
/// the skeleton, where the model does not see the off-skeleton approach, so
/// the comparison is skipped for them.
inline Type1SlopeCheck check_type1_slopes(const SkeletalMorphism& m, const DifferentData& d, const std::string& y,
                                          const Rational& claimed) {
  const Vertex& v = m.source.vertex(y);
  if (v.point_type != 1) fail(ErrorKind::InvalidArgument, y + " is not a type-1 vertex");
  auto slots = m.source.slots_at(y);
  if (slots.size() != 1) fail(ErrorKind::InvalidGraph, "type-1 vertex " + y + " must have degree 1");
  auto profile = d.edge_profile.find(slots[0].edge);
  if (profile == d.edge_profile.end()) fail(ErrorKind::InvalidArgument, "no log-different along " + slots[0].edge);
  Type1SlopeCheck out;
  out.terminal_slope = profile->second.terminal_slope();
  out.wild = out.terminal_slope > 0;
  if (m.n_vertex(y) > 1) {
    out.skipped = true;
    out.report.note("different.type1_slope", {y}, "ramified point on the skeleton; slope check skipped");
    return out;
  }
  if (out.terminal_slope != claimed) {
    out.report.identity_failed("different.type1_slope", {y}, "terminal slope differs from the claimed log-different",
                               format_rational(out.terminal_slope), format_rational(claimed));
  }
  return out;
}

/// Reasons for which (Gamma_Y, Gamma_X) fails to be a skeleton of f.
///
/// Besides the listed off-skeleton germs, a break of the log-different in the
/// interior of an edge is reported: balancing at an interior point (genus 0,
/// multiplicity n_e) forces the break to equal the total contribution of its
/// off-skeleton branches, so some branch there is non-trivial.
inline BalanceReport skeleton_criterion_report(const SkeletalMorphism& m, const DifferentData& d,
                                               bool ram_in_vertices) {
  BalanceReport report;
  if (!ram_in_vertices) report.error("criterion.ramification", {}, "ramification locus not contained in the vertices");
  for (const auto& [id, v] : m.source.vertices()) {
    if (v.point_type == 2 && !d.generic(id)) {
      report.error("criterion.generic_flag", {id}, "unlisted branches are not asserted delta-trivial");
    }
  }
  for (const auto& [v, germs] : d.listed_branches) {
    for (const auto& b : germs) {
      if (b.kind == GermKind::off_skeleton && !is_delta_trivial(b)) {
        report.identity_failed("criterion.off_skeleton_branch", {v}, "branch pointing off the skeleton is not trivial",
                               format_rational(b.slope), std::to_string(b.n - 1));
      }
    }
  }
  for (const auto& [id, f] : d.edge_profile) {
    if (!m.source.has_edge(id)) continue;
    auto length = finite_length(m.source.edge(id));
    for (const auto& b : f.breaks()) {
      if (!length || b < *length) {
        report.error("criterion.interior_break", {id}, "log-different breaks at interior depth " + format_rational(b));
        break;
      }
    }
  }
  return report;
}

inline bool check_skeleton_criterion(const SkeletalMorphism& m, const DifferentData& d, bool ram_in_vertices) {
  return skeleton_criterion_report(m, d, ram_in_vertices).passed();
}

/// Bookkeeping for summing local balancing over a proper model.
///
/// global_lhs = vertex_lhs_sum + genus_correction is the genus formula;
/// vertex_lhs_sum = local_rhs_sum is local balancing; regrouping the local
/// terms edge by edge gives
///   local_rhs_sum + genus_correction = type1_sum + interior_sum + off_skeleton_sum,
/// where interior_sum collects what is left on each edge after the type-1
/// terms (terminal slope + n - 1) are taken out. On a skeleton of f the
/// interior and off-skeleton parts vanish and the classical formula remains.
struct GlobalRiemannHurwitz {
  Rational global_lhs;
  Rational vertex_lhs_sum;
  Rational genus_correction;
  Rational local_rhs_sum;
  Rational type1_sum;
  Rational interior_sum;
  Rational off_skeleton_sum;
  std::map<std::string, Rational> interior_terms;  // by edge

  bool genus_identity_holds() const { return global_lhs == vertex_lhs_sum + genus_correction; }
  bool regrouping_holds() const {
    return local_rhs_sum + genus_correction == type1_sum + interior_sum + off_skeleton_sum;
  }
  bool telescopes() const {
    return genus_identity_holds() && regrouping_holds() && vertex_lhs_sum == local_rhs_sum && interior_sum == 0 &&
           off_skeleton_sum == 0 && global_lhs == type1_sum;
  }
};

inline GlobalRiemannHurwitz global_rh_telescoping(const SkeletalMorphism& m, const DifferentData& d) {
  GlobalRiemannHurwitz out;
  const SkeletonGraph& g = m.source;
  out.global_lhs = 2 * total_genus(g) - 2 - 2 * m.degree * (total_genus(m.target) - 1);
  std::map<EdgeSlot, Rational> germ_term;
  for (const auto& [id, v] : g.vertices()) {
    if (v.point_type == 1) {
      out.genus_correction += 2 * m.n_vertex(id) - 2;
      continue;
    }
    auto sides = wild_balance_sides(m, d, id);
    out.vertex_lhs_sum += sides.lhs;
    out.local_rhs_sum += sides.rhs;
    for (const auto& b : d.listed_branches.at(id)) {
      if (b.kind == GermKind::skeleton_edge) germ_term[b.edge] = balancing_term(b);
      else out.off_skeleton_sum += balancing_term(b);
    }
  }
  for (const auto& [id, e] : g.edges()) {
    Rational edge_correction = 2 - 2 * m.n_edge(id);
    out.genus_correction += edge_correction;
    Rational group = edge_correction;
    Rational type1_term = 0;
    for (int slot : {0, 1}) {
      const std::string& v = e.endpoint(slot);
      if (g.vertex(v).point_type == 2) {
        group += germ_term.at({id, slot});
      } else {
        group += 2 * m.n_vertex(v) - 2;
        type1_term = d.edge_profile.at(id).terminal_slope() + m.n_vertex(v) - 1;
      }
    }
    out.type1_sum += type1_term;
    out.interior_terms[id] = group - type1_term;
    out.interior_sum += group - type1_term;
  }
  return out;
}

// x -> f(start + x)
inline PiecewiseAffine shifted(const PiecewiseAffine& f, const Rational& start) {
  std::vector<Rational> breaks;
  std::vector<Rational> slopes{f.slope_at(start, Side::right)};
  for (std::size_t i = 0; i < f.breaks().size(); ++i) {
    if (f.breaks()[i] > start) {
      breaks.push_back(f.breaks()[i] - start);
      slopes.push_back(f.slopes()[i + 1]);
    }
  }
  return PiecewiseAffine(f(start), std::move(slopes), std::move(breaks));
}

// x -> f(length - x) on [0, length], continued affinely beyond.
inline PiecewiseAffine reflected(const PiecewiseAffine& f, const Rational& length) {
  std::vector<Rational> breaks;
  std::vector<Rational> slopes{-f.slope_at(length, Side::left)};
  for (std::size_t i = f.breaks().size(); i-- > 0;) {
    if (f.breaks()[i] < length) {
      breaks.push_back(length - f.breaks()[i]);
      slopes.push_back(-f.slopes()[i]);
    }
  }
  return PiecewiseAffine(f(length), std::move(slopes), std::move(breaks));
}

/// Carries different data across subdivide_morphism: new vertices get the
/// value of the edge profile, both halves get re-based profiles, and the new
/// vertex lists its two edge germs with generic_flag set.
inline DifferentData subdivide_different(const SkeletalMorphism& before, const MorphismSubdivision& sub,
                                         const DifferentData& d, ResidueCharacteristic p) {
  DifferentData out = d;
  const SkeletonGraph& g0 = before.source;
  const SkeletonGraph& g1 = sub.morphism.source;
  for (const auto& [e_id, split] : sub.source_splits) {
    const Edge& e = g0.edge(e_id);
    const PiecewiseAffine& profile = d.edge_profile.at(e_id);
    // Log-different as a function of the depth from the split endpoint.
    PiecewiseAffine from_split = split.slot == base_slot(g0, e) ? profile : reflected(profile, e.length.value());
    out.edge_profile.erase(e_id);
    const Edge& near = g1.edge(split.ids.near_edge);
    const Edge& far = g1.edge(split.ids.far_edge);
    out.edge_profile[near.id] = base_endpoint(g1, near) == near.first ? from_split : reflected(from_split, split.depth);
    PiecewiseAffine beyond = shifted(from_split, split.depth);
    out.edge_profile[far.id] = base_endpoint(g1, far) == far.first ? beyond : reflected(beyond, far.length.value());
    std::int64_t n = before.n_edge(e_id);
    out.vertex_value[split.ids.vertex] = LogValue(from_split(split.depth));
    out.inseparability_degree[split.ids.vertex] = p.power_part(n);
    out.generic_flag[split.ids.vertex] = true;
    auto germ_for = [&](const Edge& edge, int slot) {
      Rational log_slope = outward_log_slope(g1, edge, slot, out.edge_profile.at(edge.id));
      return BranchGerm{GermKind::skeleton_edge, {edge.id, slot}, n, germ_slope_from_log_slope(log_slope)};
    };
    out.listed_branches[split.ids.vertex] = {germ_for(near, 1), germ_for(far, 0)};
    // Old endpoint germs now sit on the new edges.
    for (int slot : {0, 1}) {
      const std::string& v = e.endpoint(slot);
      auto listed = out.listed_branches.find(v);
      if (listed == out.listed_branches.end()) continue;
      for (auto& b : listed->second) {
        if (b.kind == GermKind::skeleton_edge && b.edge.edge == e_id && b.edge.slot == slot) {
          b.edge = slot == split.slot ? EdgeSlot{near.id, 0} : EdgeSlot{far.id, 1};
        }
      }
    }
  }
  return out;
}

}  // namespace berkskel
