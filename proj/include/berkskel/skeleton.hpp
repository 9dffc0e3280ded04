#pragma once

// Metric genus graphs: skeletons of nice curves with typed vertices, vertex
// genera and exact logarithmic edge lengths.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "berkskel/error.hpp"
#include "berkskel/rational.hpp"
#include "berkskel/report.hpp"

namespace berkskel {

struct Vertex {
  std::string id;
  int point_type = 2;  // 1 or 2
  int genus = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  std::string id;
  std::string first;
  std::string second;
  LogValue length;

  bool is_loop() const { return first == second; }
  const std::string& endpoint(int slot) const { return slot == 0 ? first : second; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

// A germ of a skeleton edge at one of its endpoints. Loops have two.
struct EdgeSlot {
  std::string edge;
  int slot = 0;

  friend auto operator<=>(const EdgeSlot&, const EdgeSlot&) = default;
};

class SkeletonGraph {
 public:
  void add_vertex(Vertex v) {
    if (v.point_type != 1 && v.point_type != 2) {
      fail(ErrorKind::InvalidGraph, "vertex " + v.id + " has point type " + std::to_string(v.point_type));
    }
    if (v.genus < 0) fail(ErrorKind::InvalidGraph, "vertex " + v.id + " has negative genus");
    if (vertices_.count(v.id)) fail(ErrorKind::InvalidGraph, "duplicate vertex id " + v.id);
    std::string id = v.id;
    vertices_.emplace(std::move(id), std::move(v));
  }

  void add_edge(Edge e) {
    if (edges_.count(e.id)) fail(ErrorKind::InvalidGraph, "duplicate edge id " + e.id);
    vertex(e.first);
    vertex(e.second);
    std::string id = e.id;
    edges_.emplace(std::move(id), std::move(e));
  }

  bool has_vertex(const std::string& id) const { return vertices_.count(id) > 0; }
  bool has_edge(const std::string& id) const { return edges_.count(id) > 0; }

  const Vertex& vertex(const std::string& id) const {
    auto it = vertices_.find(id);
    if (it == vertices_.end()) fail(ErrorKind::UnknownId, "no vertex " + id);
    return it->second;
  }
  const Edge& edge(const std::string& id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) fail(ErrorKind::UnknownId, "no edge " + id);
    return it->second;
  }

  const std::map<std::string, Vertex>& vertices() const { return vertices_; }
  const std::map<std::string, Edge>& edges() const { return edges_; }

  // Edge germs at v in (edge id, slot) order; a loop contributes both slots.
  std::vector<EdgeSlot> slots_at(const std::string& v) const {
    std::vector<EdgeSlot> out;
    for (const auto& [id, e] : edges_) {
      if (e.first == v) out.push_back({id, 0});
      if (e.second == v) out.push_back({id, 1});
    }
    return out;
  }

  std::size_t degree(const std::string& v) const { return slots_at(v).size(); }

  friend bool operator==(const SkeletonGraph&, const SkeletonGraph&) = default;

 private:
  std::map<std::string, Vertex> vertices_;
  std::map<std::string, Edge> edges_;
};

inline std::optional<Rational> finite_length(const Edge& e) {
  if (e.length.is_infinite()) return std::nullopt;
  return e.length.value();
}

/// Endpoint from which positions along an edge are measured: the type-2 end
/// of an infinite edge, the first slot of a loop, otherwise the smaller id.
inline const std::string& base_endpoint(const SkeletonGraph& g, const Edge& e) {
  if (e.is_loop()) return e.first;
  if (e.length.is_infinite()) {
    if (g.vertex(e.first).point_type == 2) return e.first;
    return e.second;
  }
  return e.first < e.second ? e.first : e.second;
}

inline const std::string& far_endpoint(const SkeletonGraph& g, const Edge& e) {
  if (e.is_loop()) return e.second;
  return base_endpoint(g, e) == e.first ? e.second : e.first;
}

// Slot of the base endpoint (0 for loops).
inline int base_slot(const SkeletonGraph& g, const Edge& e) {
  if (e.is_loop()) return 0;
  return base_endpoint(g, e) == e.first ? 0 : 1;
}

inline ValidationReport validate(const SkeletonGraph& g) {
  ValidationReport report;
  if (g.vertices().empty()) {
    report.error("graph.nonempty", {}, "graph has no vertices");
    return report;
  }
  bool has_type2 = false;
  for (const auto& [id, v] : g.vertices()) {
    if (v.point_type == 2) has_type2 = true;
    if (v.point_type == 1 && v.genus != 0) report.error("graph.type1_genus", {id}, "type-1 vertex with nonzero genus");
    if (v.point_type == 1 && g.degree(id) != 1) {
      report.error("graph.type1_degree", {id}, "type-1 vertex has degree " + std::to_string(g.degree(id)) + ", expected 1");
    }
  }
  if (!has_type2) report.error("graph.type2_vertex", {}, "no vertex of type 2");
  for (const auto& [id, e] : g.edges()) {
    bool touches_type1 = g.vertex(e.first).point_type == 1 || g.vertex(e.second).point_type == 1;
    if (touches_type1 != e.length.is_infinite()) {
      report.error("graph.length_type", {id},
                   touches_type1 ? "edge at a type-1 vertex must have length inf"
                                 : "edge between type-2 vertices must have finite length");
    }
    if (e.length.is_finite() && e.length.value() <= 0) report.error("graph.length_positive", {id}, "edge length must be positive");
  }
  // Connectivity by flood fill over edges.
  std::set<std::string> seen{g.vertices().begin()->first};
  std::vector<std::string> stack{g.vertices().begin()->first};
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    for (const auto& [id, e] : g.edges()) {
      for (const auto* w : {&e.first, &e.second}) {
        if ((e.first == v || e.second == v) && seen.insert(*w).second) stack.push_back(*w);
      }
    }
  }
  if (seen.size() != g.vertices().size()) {
    for (const auto& [id, v] : g.vertices()) {
      if (!seen.count(id)) report.error("graph.connected", {id}, "vertex not connected to " + *seen.begin());
    }
  }
  return report;
}

inline void require_valid(const SkeletonGraph& g) {
  auto report = validate(g);
  if (!report.passed()) fail(ErrorKind::InvalidGraph, render(report));
}

inline std::int64_t first_betti(const SkeletonGraph& g) {
  require_valid(g);
  return static_cast<std::int64_t>(g.edges().size()) - static_cast<std::int64_t>(g.vertices().size()) + 1;
}

/// Genus of the curve: h^1 of the skeleton plus the vertex genera.
inline std::int64_t total_genus(const SkeletonGraph& g) {
  std::int64_t genus = first_betti(g);
  for (const auto& [id, v] : g.vertices()) genus += v.genus;
  return genus;
}

/// A vertex, or a point inside an edge at `depth` from the endpoint `from`.
/// Depths on a loop are measured from its first slot.
struct SkeletonPoint {
  std::string id;
  std::optional<std::string> from;  // set iff the point lies on an edge
  Rational depth{0};

  static SkeletonPoint at_vertex(std::string v) { return {std::move(v), std::nullopt, 0}; }
  static SkeletonPoint on_edge(std::string e, std::string from, Rational depth) {
    return {std::move(e), std::move(from), std::move(depth)};
  }

  bool is_vertex() const { return !from.has_value(); }

  friend bool operator==(const SkeletonPoint&, const SkeletonPoint&) = default;
};

/// Normalized address: edge points are measured from base_endpoint, depths
/// 0 and length collapse onto the endpoints.
inline SkeletonPoint locate(const SkeletonGraph& g, const SkeletonPoint& p) {
  if (p.is_vertex()) {
    g.vertex(p.id);
    return p;
  }
  const Edge& e = g.edge(p.id);
  if (*p.from != e.first && *p.from != e.second) fail(ErrorKind::UnknownId, *p.from + " is not an endpoint of " + e.id);
  if (p.depth < 0) fail(ErrorKind::OutOfRange, "negative depth on " + e.id);
  auto length = finite_length(e);
  if (!length && *p.from != base_endpoint(g, e)) {
    fail(ErrorKind::OutOfRange, "points of infinite edge " + e.id + " are addressed from its type-2 end");
  }
  if (length && p.depth > *length) fail(ErrorKind::OutOfRange, "depth beyond the length of " + e.id);
  if (p.depth == 0) return SkeletonPoint::at_vertex(*p.from);
  Rational depth = p.depth;
  if (!e.is_loop() && *p.from != base_endpoint(g, e)) depth = *length - depth;
  if (length && depth == *length) return SkeletonPoint::at_vertex(far_endpoint(g, e));
  if (depth == 0) return SkeletonPoint::at_vertex(base_endpoint(g, e));
  return SkeletonPoint::on_edge(e.id, base_endpoint(g, e), depth);
}

struct SubdivisionIds {
  std::string vertex;
  std::string near_edge;  // from the split endpoint to the new vertex
  std::string far_edge;   // from the new vertex to the other endpoint
};

/// Inserts a genus-0 type-2 vertex at `depth` from the endpoint in `slot` of
/// `edge`; the near edge runs from that endpoint to the new vertex.
inline SkeletonGraph subdivide(const SkeletonGraph& g, const std::string& edge, int slot, const Rational& depth,
                               const SubdivisionIds& ids) {
  const Edge& e = g.edge(edge);
  const std::string& from = e.endpoint(slot);
  const std::string& to = e.endpoint(1 - slot);
  if (e.length.is_infinite() && g.vertex(from).point_type != 2) {
    fail(ErrorKind::OutOfRange, "infinite edge " + edge + " is split from its type-2 end");
  }
  if (depth <= 0 || (e.length.is_finite() && depth >= e.length.value())) {
    fail(ErrorKind::OutOfRange, "subdivision point must be interior to " + edge);
  }
  if (g.has_vertex(ids.vertex)) fail(ErrorKind::InvalidGraph, "duplicate vertex id " + ids.vertex);
  SkeletonGraph out;
  for (const auto& [id, v] : g.vertices()) out.add_vertex(v);
  out.add_vertex({ids.vertex, 2, 0});
  for (const auto& [id, other] : g.edges()) {
    if (id != edge) out.add_edge(other);
  }
  LogValue far_length = e.length.is_infinite() ? LogValue::infinity() : LogValue(e.length.value() - depth);
  out.add_edge({ids.near_edge, from, ids.vertex, LogValue(depth)});
  out.add_edge({ids.far_edge, ids.vertex, to, far_length});
  return out;
}

}  // namespace berkskel
