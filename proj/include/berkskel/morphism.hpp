#pragma once

// Skeletal morphisms: maps of metric genus graphs with vertex and edge
// multiplicities, and the validators for their balancing conditions.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "berkskel/error.hpp"
#include "berkskel/rational.hpp"
#include "berkskel/report.hpp"
#include "berkskel/skeleton.hpp"

namespace berkskel {

// Image of a source edge. `reversed` says the source's first slot maps to the
// target's second slot; it is what disambiguates edges mapping onto loops.
struct EdgeImage {
  std::string edge;
  bool reversed = false;

  friend bool operator==(const EdgeImage&, const EdgeImage&) = default;
};

struct SkeletalMorphism {
  SkeletonGraph source;
  SkeletonGraph target;
  std::map<std::string, std::string> vertex_map;
  std::map<std::string, EdgeImage> edge_map;
  std::map<std::string, std::int64_t> vertex_multiplicity;
  std::map<std::string, std::int64_t> edge_multiplicity;
  std::int64_t degree = 1;

  std::int64_t n_vertex(const std::string& v) const { return lookup(vertex_multiplicity, v, "vertex multiplicity"); }
  std::int64_t n_edge(const std::string& e) const { return lookup(edge_multiplicity, e, "edge multiplicity"); }
  const std::string& image_vertex(const std::string& v) const { return lookup(vertex_map, v, "vertex image"); }
  const EdgeImage& image_edge(const std::string& e) const { return lookup(edge_map, e, "edge image"); }

  // Germ of the target edge that the given source germ maps to.
  EdgeSlot image_slot(const EdgeSlot& s) const {
    const EdgeImage& h = image_edge(s.edge);
    return {h.edge, s.slot ^ static_cast<int>(h.reversed)};
  }

  friend bool operator==(const SkeletalMorphism&, const SkeletalMorphism&) = default;

 private:
  template <class Map>
  static const typename Map::mapped_type& lookup(const Map& map, const std::string& key, const char* what) {
    auto it = map.find(key);
    if (it == map.end()) fail(ErrorKind::UnknownId, std::string("no ") + what + " for " + key);
    return it->second;
  }
};

/// Incidence, type preservation, multiplicities and the metric rule
/// length(f(e)) = n_e * length(e).
inline BalanceReport validate_structure(const SkeletalMorphism& m) {
  BalanceReport report;
  if (m.degree < 1) report.error("morphism.degree", {}, "degree must be positive");
  for (const auto& [id, v] : m.source.vertices()) {
    auto it = m.vertex_map.find(id);
    if (it == m.vertex_map.end() || !m.target.has_vertex(it->second)) {
      report.error("morphism.vertex_map", {id}, "source vertex has no image in the target");
      continue;
    }
    if (m.target.vertex(it->second).point_type != v.point_type) {
      report.error("morphism.type", {id}, "maps type-" + std::to_string(v.point_type) + " vertex to type-" +
                                              std::to_string(m.target.vertex(it->second).point_type) + " vertex " +
                                              it->second);
    }
    auto n = m.vertex_multiplicity.find(id);
    if (n == m.vertex_multiplicity.end() || n->second < 1) {
      report.error("morphism.multiplicity", {id}, "vertex multiplicity missing or not positive");
    }
  }
  for (const auto& [id, e] : m.source.edges()) {
    auto it = m.edge_map.find(id);
    if (it == m.edge_map.end() || !m.target.has_edge(it->second.edge)) {
      report.error("morphism.edge_map", {id}, "source edge has no image in the target");
      continue;
    }
    auto n = m.edge_multiplicity.find(id);
    if (n == m.edge_multiplicity.end() || n->second < 1) {
      report.error("morphism.multiplicity", {id}, "edge multiplicity missing or not positive");
      continue;
    }
    const Edge& h = m.target.edge(it->second.edge);
    auto mapped = [&](const std::string& v) {
      auto f = m.vertex_map.find(v);
      return f == m.vertex_map.end() ? std::string() : f->second;
    };
    const std::string& h_first = it->second.reversed ? h.second : h.first;
    const std::string& h_second = it->second.reversed ? h.first : h.second;
    if (mapped(e.first) != h_first || mapped(e.second) != h_second) {
      report.error("morphism.incidence", {id}, "endpoints do not map onto the endpoints of " + h.id +
                                                   (it->second.reversed ? " (reversed)" : ""));
    }
    LogValue expected = e.length.scaled(n->second);
    if (expected != h.length) {
      report.identity_failed("morphism.metric", {id, h.id},
                             "length(f(e)) != n_e * length(e) with n_e = " + std::to_string(n->second), h.length.str(),
                             expected.str());
    }
  }
  for (const auto& [id, image] : m.vertex_map) {
    if (!m.source.has_vertex(id)) report.error("morphism.vertex_map", {id}, "mapped vertex not in the source");
  }
  for (const auto& [id, image] : m.edge_map) {
    if (!m.source.has_edge(id)) report.error("morphism.edge_map", {id}, "mapped edge not in the source");
  }
  return report;
}

/// Sum of n_v over the fibre of each target vertex equals the degree.
inline BalanceReport check_fiber_degree(const SkeletalMorphism& m) {
  BalanceReport report;
  std::map<std::string, std::int64_t> fiber_sum;
  for (const auto& [id, u] : m.target.vertices()) fiber_sum[id] = 0;
  for (const auto& [v, u] : m.vertex_map) fiber_sum[u] += m.n_vertex(v);
  for (const auto& [u, sum] : fiber_sum) {
    if (sum != m.degree) {
      report.identity_failed("morphism.fiber_degree", {u}, "sum of n_v over the fibre differs from the degree",
                             std::to_string(sum), std::to_string(m.degree));
    }
  }
  return report;
}

/// n_v equals the sum of n_e over the germs at v lying over each germ at f(v).
inline BalanceReport check_vertex_edge_balance(const SkeletalMorphism& m) {
  BalanceReport report;
  for (const auto& [v, vertex] : m.source.vertices()) {
    const std::string& u = m.image_vertex(v);
    std::map<EdgeSlot, std::int64_t> over;
    for (const auto& s : m.target.slots_at(u)) over[s] = 0;
    for (const auto& s : m.source.slots_at(v)) over[m.image_slot(s)] += m.n_edge(s.edge);
    for (const auto& [h, sum] : over) {
      if (sum != m.n_vertex(v)) {
        report.identity_failed("morphism.vertex_edge_balance", {v, h.edge},
                               "n_v differs from the sum of n_e over branch " + h.edge + "/" + std::to_string(h.slot),
                               std::to_string(m.n_vertex(v)), std::to_string(sum));
      }
    }
  }
  return report;
}

struct IdentitySides {
  Rational lhs;
  Rational rhs;
  bool holds() const { return lhs == rhs; }
};

// 2g(v) - 2 - 2 n_v (g(f(v)) - 1) and the sum of (n_e - 1) over edge germs at v.
inline IdentitySides tame_rh_sides(const SkeletalMorphism& m, const std::string& v) {
  const Vertex& y = m.source.vertex(v);
  const Vertex& x = m.target.vertex(m.image_vertex(v));
  std::int64_t n = m.n_vertex(v);
  Rational lhs = 2 * y.genus - 2 - 2 * n * (x.genus - 1);
  Rational rhs = 0;
  for (const auto& s : m.source.slots_at(v)) rhs += m.n_edge(s.edge) - 1;
  return {lhs, rhs};
}

enum class TameScope { all_vertices, tame_vertices_only };

/// Tame local Riemann-Hurwitz formula at every type-2 source vertex. With
/// TameScope::all_vertices any vertex with p | n_v raises NotTame; with
/// tame_vertices_only such vertices are skipped.
inline BalanceReport check_tame_local_rh(const SkeletalMorphism& m, ResidueCharacteristic p,
                                         TameScope scope = TameScope::all_vertices) {
  BalanceReport report;
  for (const auto& [v, vertex] : m.source.vertices()) {
    if (vertex.point_type != 2) continue;
    if (p.divides(m.n_vertex(v))) {
      if (scope == TameScope::all_vertices) {
        fail(ErrorKind::NotTame, "vertex " + v + " has n_v = " + std::to_string(m.n_vertex(v)) +
                                     " divisible by p = " + std::to_string(p.value()));
      }
      continue;
    }
    auto sides = tame_rh_sides(m, v);
    if (!sides.holds()) {
      report.identity_failed("morphism.tame_local_rh", {v}, "2g(v)-2-2n_v(g(u)-1) != sum(n_e-1)",
                             format_rational(sides.lhs), format_rational(sides.rhs));
    }
  }
  return report;
}

/// Skeleton model of t -> t^n on the projective line: the path
/// zero -- gauss -- infinity over itself, every multiplicity n.
inline SkeletalMorphism make_kummer(std::int64_t n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "Kummer degree must be positive");
  SkeletonGraph line;
  line.add_vertex({"gauss", 2, 0});
  line.add_vertex({"zero", 1, 0});
  line.add_vertex({"infinity", 1, 0});
  line.add_edge({"to_zero", "gauss", "zero", LogValue::infinity()});
  line.add_edge({"to_infinity", "gauss", "infinity", LogValue::infinity()});
  SkeletalMorphism m;
  m.source = line;
  m.target = line;
  for (const auto& [id, v] : line.vertices()) {
    m.vertex_map[id] = id;
    m.vertex_multiplicity[id] = n;
  }
  for (const auto& [id, e] : line.edges()) {
    m.edge_map[id] = {id, false};
    m.edge_multiplicity[id] = n;
  }
  m.degree = n;
  return m;
}

/// outer o inner, for inner: Y -> Z and outer: Z -> X.
inline SkeletalMorphism compose(const SkeletalMorphism& outer, const SkeletalMorphism& inner) {
  if (!(inner.target == outer.source)) fail(ErrorKind::InvalidArgument, "morphisms are not composable");
  SkeletalMorphism m;
  m.source = inner.source;
  m.target = outer.target;
  for (const auto& [v, z] : inner.vertex_map) {
    m.vertex_map[v] = outer.image_vertex(z);
    m.vertex_multiplicity[v] = inner.n_vertex(v) * outer.n_vertex(z);
  }
  for (const auto& [e, image] : inner.edge_map) {
    const EdgeImage& next = outer.image_edge(image.edge);
    m.edge_map[e] = {next.edge, image.reversed != next.reversed};
    m.edge_multiplicity[e] = inner.n_edge(e) * outer.n_edge(image.edge);
  }
  m.degree = inner.degree * outer.degree;
  return m;
}

// Where one source edge was split by subdivide_morphism.
struct EdgeSplit {
  int slot = 0;       // endpoint slot the depth is measured from
  Rational depth;     // depth on the source edge
  SubdivisionIds ids;
};

struct MorphismSubdivision {
  SkeletalMorphism morphism;
  std::map<std::string, EdgeSplit> source_splits;  // by original source edge
  SubdivisionIds target_ids;
};

/// Splits target edge h at `depth` from its endpoint in `slot`, and every
/// source edge over h at the matching point (depth / n_e). New ids are
/// derived from the old ones: <id>.mid, <id>.near, <id>.far.
inline MorphismSubdivision subdivide_morphism(const SkeletalMorphism& m, const std::string& h, int slot,
                                              const Rational& depth) {
  auto ids_for = [](const std::string& id) { return SubdivisionIds{id + ".mid", id + ".near", id + ".far"}; };
  MorphismSubdivision out;
  out.target_ids = ids_for(h);
  SkeletalMorphism& r = out.morphism;
  r.target = subdivide(m.target, h, slot, depth, out.target_ids);
  r.source = m.source;
  r.vertex_map = m.vertex_map;
  r.vertex_multiplicity = m.vertex_multiplicity;
  r.degree = m.degree;
  for (const auto& [e, image] : m.edge_map) {
    if (image.edge != h) {
      r.edge_map[e] = image;
      r.edge_multiplicity[e] = m.n_edge(e);
      continue;
    }
    std::int64_t n = m.n_edge(e);
    EdgeSplit split{slot ^ static_cast<int>(image.reversed), depth / n, ids_for(e)};
    r.source = subdivide(r.source, e, split.slot, split.depth, split.ids);
    r.vertex_map[split.ids.vertex] = out.target_ids.vertex;
    r.vertex_multiplicity[split.ids.vertex] = n;
    r.edge_map[split.ids.near_edge] = {out.target_ids.near_edge, false};
    r.edge_map[split.ids.far_edge] = {out.target_ids.far_edge, false};
    r.edge_multiplicity[split.ids.near_edge] = n;
    r.edge_multiplicity[split.ids.far_edge] = n;
    out.source_splits[e] = split;
  }
  return out;
}

}  // namespace berkskel
