#pragma once

// Plain-text documents: named sections of line-oriented records, exact
// rationals only.
//
//   [config]
//   p = 3
//   v_p = 1
//
//   [graph Y]
//   vertex gauss type=2 genus=0
//   edge to_zero gauss zero length=inf
//
//   [morphism f]
//   source = Y
//   target = X
//   degree = 3
//   vertex gauss -> gauss n=3
//   edge to_zero -> to_zero n=3          (append `reversed` to flip)
//
//   [different delta]
//   morphism = f
//   ramification_in_vertices = true
//   vertex gauss value=1 insep=3 generic=true
//   edge to_zero profile=pm(1;0)
//   germ gauss edge=to_zero slot=0 n=3 slope=0
//   germ gauss off n=3 slope=2
//
//   [field phi]
//   morphism = f
//   vertex gauss profile=pm(0;3;1/2:1)
//   edge to_zero breaks=1/2:0 slopes=3,1    (constant:rate per curve, or none)
//
//   [profiles]
//   step = pm(0;3;1/2:1)
//
// `#` starts a comment. serialize() emits the canonical form: sections and
// records sorted by id, one space between tokens.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "berkskel/different.hpp"
#include "berkskel/error.hpp"
#include "berkskel/models.hpp"
#include "berkskel/morphism.hpp"
#include "berkskel/pm_function.hpp"
#include "berkskel/profile.hpp"
#include "berkskel/rational.hpp"
#include "berkskel/skeleton.hpp"

namespace berkskel {

struct Config {
  ResidueCharacteristic p;
  std::map<std::string, LogValue> logs;

  friend bool operator==(const Config&, const Config&) = default;
};

struct MorphismEntry {
  std::string source;  // graph names
  std::string target;
  SkeletalMorphism morphism;

  friend bool operator==(const MorphismEntry&, const MorphismEntry&) = default;
};

struct DifferentEntry {
  std::string morphism;
  bool ramification_in_vertices = true;
  DifferentData data;

  friend bool operator==(const DifferentEntry&, const DifferentEntry&) = default;
};

struct FieldEntry {
  std::string morphism;
  ProfileField field;

  friend bool operator==(const FieldEntry&, const FieldEntry&) = default;
};

struct Document {
  Config config;
  std::map<std::string, SkeletonGraph> graphs;
  std::map<std::string, MorphismEntry> morphisms;
  std::map<std::string, DifferentEntry> differents;
  std::map<std::string, FieldEntry> fields;
  std::map<std::string, ProfileFunction> profiles;

  friend bool operator==(const Document&, const Document&) = default;
};

namespace detail {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r') ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

inline std::vector<std::string> split_on(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      out.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

// Wraps library errors raised while reading a record with its line number.
template <class F>
auto at_line(std::size_t line, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DanglingReference) throw;
    std::string what = e.what();
    if (e.kind() == ErrorKind::ParseError && what.rfind("ParseError: line ", 0) == 0) throw;
    parse_fail(line, what);
  }
}

// key=value attributes after the positional tokens.
class Attributes {
 public:
  Attributes(const Line& line, std::size_t first) : line_(line.number) {
    for (std::size_t i = first; i < line.tokens.size(); ++i) {
      const std::string& t = line.tokens[i];
      auto eq = t.find('=');
      if (eq == std::string::npos) {
        flags_.push_back(t);
        continue;
      }
      std::string key = t.substr(0, eq);
      if (!values_.emplace(key, t.substr(eq + 1)).second) parse_fail(line_, "duplicate attribute " + key);
    }
  }

  const std::string& required(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) parse_fail(line_, "expected attribute " + key + "=");
    used_.push_back(key);
    return it->second;
  }

  std::optional<std::string> optional(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.push_back(key);
    return it->second;
  }

  bool flag(const std::string& name) {
    auto it = std::find(flags_.begin(), flags_.end(), name);
    if (it == flags_.end()) return false;
    flags_.erase(it);
    return true;
  }

  // Every attribute and flag must have been consumed.
  void finish() {
    if (!flags_.empty()) parse_fail(line_, "unexpected token '" + flags_.front() + "'");
    for (const auto& [key, value] : values_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) parse_fail(line_, "unknown attribute " + key);
    }
  }

  Rational rational(const std::string& key) {
    const std::string& text = required(key);
    auto value = try_parse_rational(text);
    if (!value) parse_fail(line_, "malformed rational '" + text + "' for " + key);
    return *value;
  }

  std::int64_t integer(const std::string& key) {
    Rational value = rational(key);
    if (!is_integer(value)) parse_fail(line_, key + " must be an integer");
    return at_line(line_, [&] { return to_int64(value); });
  }

  LogValue log_value(const std::string& key) {
    const std::string& text = required(key);
    if (text == "inf") return LogValue::infinity();
    auto value = try_parse_rational(text);
    if (!value) parse_fail(line_, "malformed rational '" + text + "' for " + key);
    return at_line(line_, [&] { return LogValue(*value); });
  }

  bool boolean(const std::string& key) {
    const std::string& text = required(key);
    if (text == "true") return true;
    if (text == "false") return false;
    parse_fail(line_, "expected true or false for " + key);
  }

 private:
  std::size_t line_;
  std::map<std::string, std::string> values_;
  std::vector<std::string> flags_;
  std::vector<std::string> used_;
};

inline bool is_property(const Line& line) { return line.tokens.size() == 3 && line.tokens[1] == "="; }

inline Rational rational_token(std::size_t line, const std::string& text) {
  auto value = try_parse_rational(text);
  if (!value) parse_fail(line, "malformed rational '" + text + "'");
  return *value;
}

struct Section {
  std::string kind;
  std::string name;
  std::size_t line = 0;
  std::vector<Line> body;
};

inline std::vector<Section> read_sections(std::string_view text) {
  std::vector<Section> sections;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++number;
    start = end + 1;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto tokens = split_words(raw);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tokens[0].front() == '[') {
      std::string header;
      for (const auto& t : tokens) header += (header.empty() ? "" : " ") + t;
      if (header.back() != ']') parse_fail(number, "expected ']' closing the section header");
      auto words = split_words(std::string_view(header).substr(1, header.size() - 2));
      if (words.empty() || words.size() > 2) parse_fail(number, "expected [kind] or [kind name]");
      sections.push_back({words[0], words.size() == 2 ? words[1] : "", number, {}});
    } else {
      if (sections.empty()) parse_fail(number, "expected a section header before records");
      sections.back().body.push_back({number, std::move(tokens)});
    }
    if (end == text.size()) break;
  }
  return sections;
}

inline void parse_config(const Section& s, Config& config) {
  for (const auto& line : s.body) {
    if (!is_property(line)) parse_fail(line.number, "expected 'key = value'");
    const std::string& key = line.tokens[0];
    const std::string& value = line.tokens[2];
    if (key == "p") {
      Rational p = rational_token(line.number, value);
      if (!is_integer(p) || p < 0) parse_fail(line.number, "p must be 0 or a prime");
      config.p = at_line(line.number, [&] { return ResidueCharacteristic(static_cast<std::uint64_t>(to_int64(p))); });
    } else {
      if (value != "inf" && !try_parse_rational(value)) parse_fail(line.number, "malformed rational '" + value + "'");
      config.logs[key] = at_line(line.number, [&] { return parse_log_value(value); });
    }
  }
}

inline SkeletonGraph parse_graph(const Section& s) {
  SkeletonGraph g;
  std::vector<const Line*> edges;
  for (const auto& line : s.body) {
    const auto& t = line.tokens;
    if (t[0] == "vertex") {
      if (t.size() < 2) parse_fail(line.number, "expected vertex id");
      Attributes a(line, 2);
      Vertex v{t[1], static_cast<int>(a.integer("type")), 0};
      if (a.optional("genus")) v.genus = static_cast<int>(a.integer("genus"));
      a.finish();
      at_line(line.number, [&] { g.add_vertex(v); });
    } else if (t[0] == "edge") {
      edges.push_back(&line);
    } else {
      parse_fail(line.number, "expected 'vertex' or 'edge', got '" + t[0] + "'");
    }
  }
  for (const Line* line : edges) {
    const auto& t = line->tokens;
    if (t.size() < 4) parse_fail(line->number, "expected 'edge ID FIRST SECOND length=...'");
    Attributes a(*line, 4);
    Edge e{t[1], t[2], t[3], a.log_value("length")};
    a.finish();
    for (const auto* end : {&e.first, &e.second}) {
      if (!g.has_vertex(*end)) {
        fail(ErrorKind::DanglingReference, "line " + std::to_string(line->number) + ": edge " + e.id +
                                               " refers to undefined vertex " + *end);
      }
    }
    at_line(line->number, [&] { g.add_edge(e); });
  }
  return g;
}

[[noreturn]] inline void dangling(std::size_t line, const std::string& what) {
  fail(ErrorKind::DanglingReference, "line " + std::to_string(line) + ": " + what);
}

inline const SkeletonGraph& graph_ref(const Document& doc, std::size_t line, const std::string& name) {
  auto it = doc.graphs.find(name);
  if (it == doc.graphs.end()) dangling(line, "undefined graph " + name);
  return it->second;
}

inline std::string take_property(const Section& s, std::vector<const Line*>& records, const std::string& key,
                                 bool required = true) {
  std::optional<std::string> value;
  std::vector<const Line*> rest;
  for (const auto& line : s.body) {
    if (is_property(line) && line.tokens[0] == key) {
      if (value) parse_fail(line.number, "duplicate property " + key);
      value = line.tokens[2];
    }
  }
  for (const Line* line : records) {
    if (!(is_property(*line) && line->tokens[0] == key)) rest.push_back(line);
  }
  records = rest;
  if (!value && required) parse_fail(s.line, "section [" + s.kind + " " + s.name + "] needs '" + key + " = ...'");
  return value.value_or("");
}

inline std::vector<const Line*> records_of(const Section& s) {
  std::vector<const Line*> out;
  for (const auto& line : s.body) out.push_back(&line);
  return out;
}

inline void no_leftover_properties(const std::vector<const Line*>& records) {
  for (const Line* line : records) {
    if (is_property(*line)) parse_fail(line->number, "unknown property " + line->tokens[0]);
  }
}

inline MorphismEntry parse_morphism(const Document& doc, const Section& s) {
  auto records = records_of(s);
  MorphismEntry entry;
  entry.source = take_property(s, records, "source");
  entry.target = take_property(s, records, "target");
  std::string degree = take_property(s, records, "degree");
  no_leftover_properties(records);
  SkeletalMorphism& m = entry.morphism;
  m.source = graph_ref(doc, s.line, entry.source);
  m.target = graph_ref(doc, s.line, entry.target);
  Rational d = rational_token(s.line, degree);
  if (!is_integer(d)) parse_fail(s.line, "degree must be an integer");
  m.degree = at_line(s.line, [&] { return to_int64(d); });
  for (const Line* line : records) {
    const auto& t = line->tokens;
    if (t.size() < 4 || t[2] != "->") parse_fail(line->number, "expected 'vertex|edge SRC -> TGT n=...'");
    Attributes a(*line, 4);
    std::int64_t n = a.integer("n");
    if (t[0] == "vertex") {
      a.finish();
      if (!m.source.has_vertex(t[1])) dangling(line->number, "undefined source vertex " + t[1]);
      if (!m.target.has_vertex(t[3])) dangling(line->number, "undefined target vertex " + t[3]);
      if (m.vertex_map.count(t[1])) parse_fail(line->number, "vertex " + t[1] + " mapped twice");
      m.vertex_map[t[1]] = t[3];
      m.vertex_multiplicity[t[1]] = n;
    } else if (t[0] == "edge") {
      bool reversed = a.flag("reversed");
      a.finish();
      if (!m.source.has_edge(t[1])) dangling(line->number, "undefined source edge " + t[1]);
      if (!m.target.has_edge(t[3])) dangling(line->number, "undefined target edge " + t[3]);
      if (m.edge_map.count(t[1])) parse_fail(line->number, "edge " + t[1] + " mapped twice");
      m.edge_map[t[1]] = {t[3], reversed};
      m.edge_multiplicity[t[1]] = n;
    } else {
      parse_fail(line->number, "expected 'vertex' or 'edge', got '" + t[0] + "'");
    }
  }
  return entry;
}

inline const MorphismEntry& morphism_ref(const Document& doc, std::size_t line, const std::string& name) {
  auto it = doc.morphisms.find(name);
  if (it == doc.morphisms.end()) dangling(line, "undefined morphism " + name);
  return it->second;
}

inline DifferentEntry parse_different(const Document& doc, const Section& s) {
  auto records = records_of(s);
  DifferentEntry entry;
  entry.morphism = take_property(s, records, "morphism");
  std::string ram = take_property(s, records, "ramification_in_vertices", false);
  no_leftover_properties(records);
  if (ram == "false") entry.ramification_in_vertices = false;
  else if (!ram.empty() && ram != "true") parse_fail(s.line, "ramification_in_vertices must be true or false");
  const SkeletonGraph& g = morphism_ref(doc, s.line, entry.morphism).morphism.source;
  DifferentData& d = entry.data;
  std::set<std::string> seen_vertex;
  for (const Line* line : records) {
    const auto& t = line->tokens;
    if (t.size() < 2) parse_fail(line->number, "expected an id after '" + t[0] + "'");
    if (t[0] == "vertex") {
      if (!g.has_vertex(t[1])) dangling(line->number, "undefined vertex " + t[1]);
      Attributes a(*line, 2);
      if (seen_vertex.count(t[1])) parse_fail(line->number, "vertex " + t[1] + " given twice");
      seen_vertex.insert(t[1]);
      if (a.optional("value")) d.vertex_value[t[1]] = a.log_value("value");
      if (a.optional("insep")) d.inseparability_degree[t[1]] = a.integer("insep");
      if (a.optional("generic")) d.generic_flag[t[1]] = a.boolean("generic");
      a.finish();
    } else if (t[0] == "edge") {
      if (!g.has_edge(t[1])) dangling(line->number, "undefined edge " + t[1]);
      Attributes a(*line, 2);
      std::string text = a.required("profile");
      a.finish();
      if (d.edge_profile.count(t[1])) parse_fail(line->number, "edge " + t[1] + " given twice");
      d.edge_profile[t[1]] = at_line(line->number, [&] { return parse_piecewise_affine(text); });
    } else if (t[0] == "germ") {
      if (!g.has_vertex(t[1])) dangling(line->number, "undefined vertex " + t[1]);
      Attributes a(*line, 2);
      BranchGerm b;
      if (a.flag("off")) {
        b.kind = GermKind::off_skeleton;
      } else {
        b.kind = GermKind::skeleton_edge;
        b.edge.edge = a.required("edge");
        if (!g.has_edge(b.edge.edge)) dangling(line->number, "undefined edge " + b.edge.edge);
        b.edge.slot = static_cast<int>(a.integer("slot"));
        if (b.edge.slot != 0 && b.edge.slot != 1) parse_fail(line->number, "slot must be 0 or 1");
      }
      b.n = a.integer("n");
      b.slope = a.rational("slope");
      a.finish();
      d.listed_branches[t[1]].push_back(b);
    } else {
      parse_fail(line->number, "expected 'vertex', 'edge' or 'germ', got '" + t[0] + "'");
    }
  }
  return entry;
}

inline EdgeFamily parse_family(std::size_t line, const std::string& breaks, const std::string& slopes) {
  EdgeFamily fam;
  if (breaks != "none") {
    for (const auto& curve : split_on(breaks, ',')) {
      auto parts = split_on(curve, ':');
      if (parts.size() != 2) parse_fail(line, "expected constant:rate in '" + curve + "'");
      fam.break_curves.push_back({rational_token(line, parts[0]), rational_token(line, parts[1])});
    }
  }
  for (const auto& s : split_on(slopes, ',')) fam.slopes.push_back(rational_token(line, s));
  if (fam.slopes.size() != fam.break_curves.size() + 1) parse_fail(line, "need one more slope than break curves");
  return fam;
}

inline FieldEntry parse_field(const Document& doc, const Section& s) {
  auto records = records_of(s);
  FieldEntry entry;
  entry.morphism = take_property(s, records, "morphism");
  no_leftover_properties(records);
  const SkeletonGraph& g = morphism_ref(doc, s.line, entry.morphism).morphism.source;
  for (const Line* line : records) {
    const auto& t = line->tokens;
    if (t.size() < 2) parse_fail(line->number, "expected an id after '" + t[0] + "'");
    Attributes a(*line, 2);
    if (t[0] == "vertex") {
      if (!g.has_vertex(t[1])) dangling(line->number, "undefined vertex " + t[1]);
      std::string text = a.required("profile");
      a.finish();
      if (entry.field.vertex_profiles.count(t[1])) parse_fail(line->number, "vertex " + t[1] + " given twice");
      entry.field.vertex_profiles[t[1]] = at_line(line->number, [&] { return ProfileFunction(parse_pm(text)); });
    } else if (t[0] == "edge") {
      if (!g.has_edge(t[1])) dangling(line->number, "undefined edge " + t[1]);
      std::string breaks = a.required("breaks");
      std::string slopes = a.required("slopes");
      a.finish();
      if (entry.field.edge_families.count(t[1])) parse_fail(line->number, "edge " + t[1] + " given twice");
      entry.field.edge_families[t[1]] = parse_family(line->number, breaks, slopes);
    } else {
      parse_fail(line->number, "expected 'vertex' or 'edge', got '" + t[0] + "'");
    }
  }
  return entry;
}

inline void parse_profiles(const Section& s, Document& doc) {
  for (const auto& line : s.body) {
    if (!is_property(line)) parse_fail(line.number, "expected 'name = pm(...)'");
    if (doc.profiles.count(line.tokens[0])) parse_fail(line.number, "profile " + line.tokens[0] + " given twice");
    doc.profiles[line.tokens[0]] = at_line(line.number, [&] { return ProfileFunction(parse_pm(line.tokens[2])); });
  }
}

}  // namespace detail

/// Parses a document. Sections may appear in any order; references are
/// resolved afterwards, graphs first. Errors name the line.
inline Document parse(std::string_view text) {
  using namespace detail;
  auto sections = read_sections(text);
  Document doc;
  std::map<std::string, std::map<std::string, const Section*>> named;
  bool seen_config = false;
  bool seen_profiles = false;
  for (const auto& s : sections) {
    if (s.kind == "config" || s.kind == "profiles") {
      if (!s.name.empty()) parse_fail(s.line, "[" + s.kind + "] takes no name");
      bool& seen = s.kind == "config" ? seen_config : seen_profiles;
      if (seen) parse_fail(s.line, "duplicate [" + s.kind + "] section");
      seen = true;
      if (s.kind == "config") parse_config(s, doc.config);
      else parse_profiles(s, doc);
      continue;
    }
    if (s.kind != "graph" && s.kind != "morphism" && s.kind != "different" && s.kind != "field") {
      parse_fail(s.line, "unknown section kind '" + s.kind + "'");
    }
    if (s.name.empty()) parse_fail(s.line, "[" + s.kind + "] needs a name");
    if (!named[s.kind].emplace(s.name, &s).second) parse_fail(s.line, "duplicate " + s.kind + " " + s.name);
  }
  for (const auto& [name, s] : named["graph"]) doc.graphs[name] = parse_graph(*s);
  for (const auto& [name, s] : named["morphism"]) doc.morphisms[name] = parse_morphism(doc, *s);
  for (const auto& [name, s] : named["different"]) doc.differents[name] = parse_different(doc, *s);
  for (const auto& [name, s] : named["field"]) doc.fields[name] = parse_field(doc, *s);
  return doc;
}

namespace detail {

inline std::string family_breaks(const EdgeFamily& fam) {
  if (fam.break_curves.empty()) return "none";
  std::string out;
  for (const auto& c : fam.break_curves) {
    out += (out.empty() ? "" : ",") + format_rational(c.constant) + ":" + format_rational(c.rate);
  }
  return out;
}

inline std::string family_slopes(const EdgeFamily& fam) {
  std::string out;
  for (const auto& s : fam.slopes) out += (out.empty() ? "" : ",") + format_rational(s);
  return out;
}

inline auto germ_key(const BranchGerm& b) {
  return std::make_tuple(b.kind == GermKind::off_skeleton, b.edge.edge, b.edge.slot, b.n, b.slope);
}

}  // namespace detail

/// Canonical text: every section kind in a fixed order, names and ids sorted.
inline std::string serialize(const Document& doc) {
  using namespace detail;
  std::ostringstream out;
  out << "[config]\n";
  out << "p = " << doc.config.p.value() << "\n";
  for (const auto& [key, value] : doc.config.logs) out << key << " = " << value.str() << "\n";
  for (const auto& [name, g] : doc.graphs) {
    out << "\n[graph " << name << "]\n";
    for (const auto& [id, v] : g.vertices()) out << "vertex " << id << " type=" << v.point_type << " genus=" << v.genus << "\n";
    for (const auto& [id, e] : g.edges()) {
      out << "edge " << id << " " << e.first << " " << e.second << " length=" << e.length.str() << "\n";
    }
  }
  for (const auto& [name, entry] : doc.morphisms) {
    const SkeletalMorphism& m = entry.morphism;
    out << "\n[morphism " << name << "]\n";
    out << "source = " << entry.source << "\ntarget = " << entry.target << "\ndegree = " << m.degree << "\n";
    for (const auto& [v, u] : m.vertex_map) out << "vertex " << v << " -> " << u << " n=" << m.n_vertex(v) << "\n";
    for (const auto& [e, h] : m.edge_map) {
      out << "edge " << e << " -> " << h.edge << " n=" << m.n_edge(e) << (h.reversed ? " reversed" : "") << "\n";
    }
  }
  for (const auto& [name, entry] : doc.differents) {
    const DifferentData& d = entry.data;
    out << "\n[different " << name << "]\n";
    out << "morphism = " << entry.morphism << "\n";
    out << "ramification_in_vertices = " << (entry.ramification_in_vertices ? "true" : "false") << "\n";
    std::set<std::string> vertices;
    for (const auto& [v, value] : d.vertex_value) vertices.insert(v);
    for (const auto& [v, n] : d.inseparability_degree) vertices.insert(v);
    for (const auto& [v, flag] : d.generic_flag) vertices.insert(v);
    for (const auto& v : vertices) {
      out << "vertex " << v;
      if (d.vertex_value.count(v)) out << " value=" << d.vertex_value.at(v).str();
      if (d.inseparability_degree.count(v)) out << " insep=" << d.inseparability_degree.at(v);
      if (d.generic_flag.count(v)) out << " generic=" << (d.generic_flag.at(v) ? "true" : "false");
      out << "\n";
    }
    for (const auto& [e, f] : d.edge_profile) out << "edge " << e << " profile=" << format_pm(f) << "\n";
    for (const auto& [v, germs] : d.listed_branches) {
      auto sorted = germs;
      std::stable_sort(sorted.begin(), sorted.end(),
                       [](const BranchGerm& a, const BranchGerm& b) { return germ_key(a) < germ_key(b); });
      for (const auto& b : sorted) {
        out << "germ " << v;
        if (b.kind == GermKind::off_skeleton) out << " off";
        else out << " edge=" << b.edge.edge << " slot=" << b.edge.slot;
        out << " n=" << b.n << " slope=" << format_rational(b.slope) << "\n";
      }
    }
  }
  for (const auto& [name, entry] : doc.fields) {
    out << "\n[field " << name << "]\n";
    out << "morphism = " << entry.morphism << "\n";
    for (const auto& [v, f] : entry.field.vertex_profiles) out << "vertex " << v << " profile=" << format_pm(f) << "\n";
    for (const auto& [e, fam] : entry.field.edge_families) {
      out << "edge " << e << " breaks=" << family_breaks(fam) << " slopes=" << family_slopes(fam) << "\n";
    }
  }
  if (!doc.profiles.empty()) {
    out << "\n[profiles]\n";
    for (const auto& [name, f] : doc.profiles) out << name << " = " << format_pm(f) << "\n";
  }
  return out.str();
}

/// Document holding one model: graphs Y and X, morphism f, different delta
/// and field phi.
inline Document model_document(const Model& model) {
  Document doc;
  doc.config.p = model.p;
  doc.config.logs = model.logs;
  doc.graphs["X"] = model.morphism.target;
  doc.graphs["Y"] = model.morphism.source;
  doc.morphisms["f"] = {"Y", "X", model.morphism};
  doc.differents["delta"] = {"f", true, model.different};
  doc.fields["phi"] = {"f", model.field};
  return doc;
}

}  // namespace berkskel
