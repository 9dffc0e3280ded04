#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "berkskel/cli.hpp"

#include <CLI11.hpp>

#include "berkskel/different.hpp"
#include "berkskel/document.hpp"
#include "berkskel/error.hpp"
#include "berkskel/models.hpp"
#include "berkskel/morphism.hpp"
#include "berkskel/profile.hpp"
#include "berkskel/report.hpp"
#include "berkskel/skeleton.hpp"

namespace berkskel {

namespace cli {

bool color_enabled() {
  const char* value = std::getenv("BERKSKEL_COLOR");
  return value && *value && std::string(value) != "0";
}

Document load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{exit_parse, "cannot read " + path};
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse(text.str());
  } catch (const Error& e) {
    throw Exit{exit_parse, path + ": " + e.what()};
  }
}

template <class Map>
const typename Map::mapped_type& named(const Map& map, const std::string& name, const std::string& what) {
  auto it = map.find(name);
  if (it == map.end()) throw Exit{exit_failed, "no " + what + " named " + name};
  return it->second;
}

Report validate_document(const Document& doc) {
  Report report;
  for (const auto& [name, g] : doc.graphs) {
    auto r = validate(g);
    report.merge(r);
    if (r.passed()) report.note("graph", {name}, "graph is valid");
  }
  for (const auto& [name, entry] : doc.morphisms) {
    const SkeletalMorphism& m = entry.morphism;
    if (!validate(m.source).passed() || !validate(m.target).passed()) continue;
    Report r = validate_structure(m);
    if (r.passed()) {
      r.merge(check_fiber_degree(m));
      r.merge(check_vertex_edge_balance(m));
    }
    report.merge(r);
    if (r.passed()) report.note("morphism", {name}, "morphism is valid");
  }
  for (const auto& [name, entry] : doc.differents) {
    auto r = validate_different(doc.morphisms.at(entry.morphism).morphism, entry.data, doc.config.p);
    report.merge(r);
    if (r.passed()) report.note("different", {name}, "different data is valid");
  }
  for (const auto& [name, entry] : doc.fields) {
    auto r = validate_field(doc.morphisms.at(entry.morphism).morphism.source, entry.field, doc.config.p);
    report.merge(r);
    if (r.passed()) report.note("field", {name}, "profile field is valid");
  }
  return report;
}

Report balance_report(const Document& doc, const std::string& morphism_name,
                             const std::optional<std::string>& different_name) {
  const SkeletalMorphism& m = named(doc.morphisms, morphism_name, "morphism").morphism;
  ResidueCharacteristic p = doc.config.p;
  Report report;
  report.merge(validate(m.source));
  report.merge(validate(m.target));
  if (!report.passed()) return report;
  report.merge(validate_structure(m));
  if (!report.passed()) return report;
  report.merge(check_fiber_degree(m));
  report.merge(check_vertex_edge_balance(m));
  for (const auto& [v, vertex] : m.source.vertices()) {
    if (vertex.point_type != 2 || p.divides(m.n_vertex(v))) continue;
    auto sides = tame_rh_sides(m, v);
    if (sides.holds()) {
      report.note("morphism.tame_local_rh", {v}, "tame local Riemann-Hurwitz", format_rational(sides.lhs),
                  format_rational(sides.rhs));
    } else {
      report.identity_failed("morphism.tame_local_rh", {v}, "2g(v)-2-2n_v(g(u)-1) != sum(n_e-1)",
                             format_rational(sides.lhs), format_rational(sides.rhs));
    }
  }

  const DifferentEntry* entry = nullptr;
  if (different_name) {
    entry = &named(doc.differents, *different_name, "different");
    if (entry->morphism != morphism_name) {
      throw Exit{exit_failed, "different " + *different_name + " belongs to morphism " + entry->morphism};
    }
  } else {
    for (const auto& [name, candidate] : doc.differents) {
      if (candidate.morphism == morphism_name) {
        entry = &candidate;
        break;
      }
    }
  }
  if (!entry) {
    report.error("balance.missing_data", {morphism_name}, "MissingData: no different data for this morphism");
    return report;
  }
  const DifferentData& d = entry->data;
  Report structure = validate_different(m, d, p);
  report.merge(structure);
  bool all_balanced = true;
  for (const auto& [v, vertex] : m.source.vertices()) {
    if (vertex.point_type != 2) continue;
    try {
      Report r = check_wild_balancing(m, d, v);
      if (r.passed()) {
        auto sides = wild_balance_sides(m, d, v);
        report.note("different.wild_balancing", {v}, "wild balancing", format_rational(sides.lhs),
                    format_rational(sides.rhs));
      }
      all_balanced = all_balanced && r.passed();
      report.merge(r);
    } catch (const Error& e) {
      all_balanced = false;
      std::string check = e.kind() == ErrorKind::MissingSkeletonBranch ? "different.missing_branch"
                          : e.kind() == ErrorKind::InfiniteSlope        ? "different.inseparable"
                                                                        : "different.wild_balancing";
      report.error(check, {v}, e.what());
    }
  }
  Report criterion = skeleton_criterion_report(m, d, entry->ramification_in_vertices);
  report.merge(criterion);
  if (criterion.passed()) report.note("criterion", {morphism_name}, "skeleton of the morphism");
  if (all_balanced && report.passed()) {
    auto rh = global_rh_telescoping(m, d);
    if (rh.telescopes()) {
      report.note("rh.global", {morphism_name}, "local identities telescope to Riemann-Hurwitz",
                  format_rational(rh.global_lhs), format_rational(rh.type1_sum));
    } else {
      report.identity_failed("rh.global", {morphism_name}, "local identities do not telescope",
                             format_rational(rh.global_lhs), format_rational(rh.type1_sum));
    }
  }
  return report;
}

SkeletonPoint parse_point(const std::string& text) {
  auto parts = detail::split_on(text, ':');
  if (parts.size() == 1) return SkeletonPoint::at_vertex(parts[0]);
  if (parts.size() != 3) throw Exit{exit_parse, "expected VERTEX or EDGE:FROM:DEPTH, got " + text};
  auto depth = try_parse_rational(parts[2]);
  if (!depth) throw Exit{exit_parse, "malformed rational '" + parts[2] + "'"};
  return SkeletonPoint::on_edge(parts[0], parts[1], *depth);
}

static std::string threshold_text(const std::optional<LogValue>& t) { return t ? t->str() : "empty"; }

static std::string threshold_decimal(const std::optional<LogValue>& t, unsigned digits) {
  if (!t) return "empty";
  if (t->is_infinite()) return "inf";
  return to_decimal(t->value(), digits);
}

std::string radii_csv(const SkeletonGraph& g, const RadialSet& set, std::optional<unsigned> decimal) {
  std::ostringstream out;
  out << "location,position,threshold" << (decimal ? ",threshold_decimal" : "") << "\n";
  auto row = [&](const std::string& location, const std::string& position, const std::optional<LogValue>& t) {
    out << location << "," << position << "," << threshold_text(t);
    if (decimal) out << "," << threshold_decimal(t, *decimal);
    out << "\n";
  };
  for (const auto& [id, t] : set.vertex_threshold) row(id, "0", t);
  for (const auto& [id, t] : set.edge_threshold) {
    const Edge& e = g.edge(id);
    row(id, "0", threshold_at(t, 0));
    if (auto length = finite_length(e)) {
      row(id, format_rational(*length), threshold_at(t, *length));
    } else {
      std::optional<LogValue> limit;
      if (t.kind == EdgeThreshold::Kind::infinite || (t.kind == EdgeThreshold::Kind::finite && t.curve.rate > 0)) {
        limit = LogValue::infinity();
      } else if (t.kind == EdgeThreshold::Kind::finite) {
        limit = threshold_at(t, 0);
      }
      row(id, "inf", limit);
    }
  }
  return out.str();
}

static void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Exit{exit_failed, "cannot write " + path};
  file << text;
}

}  // namespace cli

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Skeletons, differents and profile functions of finite morphisms of curves"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "berkskel 0.1.0");

  std::string file;
  std::string morphism_name;
  std::string different_name;
  std::string field_name;
  std::string at;
  std::string degree_text;
  std::string csv_path;
  std::optional<unsigned> decimal;
  std::string profile_list;
  std::string out_path;
  std::uint64_t p_value = 3;
  std::string v_p_text = "1";
  std::int64_t n_value = 0;
  std::int64_t m_value = 2;
  std::string length_text = "1";

  auto* validate_cmd = app.add_subcommand("validate", "check graphs, morphisms, different data and fields");
  validate_cmd->add_option("file", file, "document")->required();

  auto* balance_cmd = app.add_subcommand("check-balance", "run every balancing check for one morphism");
  balance_cmd->add_option("file", file, "document")->required();
  balance_cmd->add_option("--morphism", morphism_name, "morphism name")->required();
  balance_cmd->add_option("--different", different_name, "different data name");

  auto* profile_cmd = app.add_subcommand("profile", "print the profile function at a point");
  profile_cmd->add_option("file", file, "document")->required();
  profile_cmd->add_option("--field", field_name, "field name")->required();
  profile_cmd->add_option("--at", at, "VERTEX or EDGE:FROM:DEPTH")->required();

  auto* radii_cmd = app.add_subcommand("radii", "thresholds of the multiplicity locus N_{>=d}");
  radii_cmd->add_option("file", file, "document")->required();
  radii_cmd->add_option("--field", field_name, "field name")->required();
  radii_cmd->add_option("--degree", degree_text, "d, a positive rational")->required();
  radii_cmd->add_option("--csv", csv_path, "output path (default stdout)");
  radii_cmd->add_option("--decimal", decimal, "add a column with this many decimal digits");

  auto* compose_cmd = app.add_subcommand("compose", "compose named profiles, source side first");
  compose_cmd->add_option("file", file, "document")->required();
  compose_cmd->add_option("--profiles", profile_list, "comma-separated names")->required();

  auto* example_cmd = app.add_subcommand("example", "emit a bundled model document");
  example_cmd->require_subcommand(1);
  auto* kummer_cmd = example_cmd->add_subcommand("kummer", "t -> t^n");
  kummer_cmd->add_option("--p", p_value, "residue characteristic")->required();
  kummer_cmd->add_option("--v-p", v_p_text, "v(p) as a rational");
  kummer_cmd->add_option("--n", n_value, "degree (default p)");
  kummer_cmd->add_option("--out", out_path, "output path (default stdout)");
  auto* tate_cmd = example_cmd->add_subcommand("tate", "unramified cyclic cover of a loop");
  tate_cmd->add_option("--m", m_value, "degree of the cover");
  tate_cmd->add_option("--length", length_text, "log-length of the loop");
  tate_cmd->add_option("--p", p_value, "residue characteristic")->default_val(0);
  tate_cmd->add_option("--out", out_path, "output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion& e) {
    out << "berkskel 0.1.0\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return exit_parse;
  }

  bool color = color_enabled();
  try {
    if (validate_cmd->parsed()) {
      Document doc = load(file);
      Report report = validate_document(doc);
      out << render(report, color);
      return report.passed() ? exit_ok : exit_failed;
    }
    if (balance_cmd->parsed()) {
      Document doc = load(file);
      std::optional<std::string> different;
      if (!different_name.empty()) different = different_name;
      Report report = balance_report(doc, morphism_name, different);
      out << render(report, color);
      return report.passed() ? exit_ok : exit_failed;
    }
    if (profile_cmd->parsed()) {
      Document doc = load(file);
      const FieldEntry& entry = named(doc.fields, field_name, "field");
      const SkeletonGraph& g = doc.morphisms.at(entry.morphism).morphism.source;
      ProfileFunction f = evaluate_field(g, entry.field, parse_point(at));
      out << format_pm(f) << "\n";
      return exit_ok;
    }
    if (radii_cmd->parsed()) {
      auto d = try_parse_rational(degree_text);
      if (!d) throw Exit{exit_parse, "malformed rational '" + degree_text + "'"};
      Document doc = load(file);
      const FieldEntry& entry = named(doc.fields, field_name, "field");
      const SkeletonGraph& g = doc.morphisms.at(entry.morphism).morphism.source;
      RadialSet set = build_radial_set(g, entry.field, *d, doc.config.p);
      write_output(csv_path, radii_csv(g, set, decimal), out);
      return exit_ok;
    }
    if (compose_cmd->parsed()) {
      Document doc = load(file);
      std::vector<ProfileFunction> steps;
      for (const auto& name : detail::split_on(profile_list, ',')) steps.push_back(named(doc.profiles, name, "profile"));
      ProfileFunction f = compose_tower(steps);
      out << format_pm(f) << "\n";
      return exit_ok;
    }
    if (kummer_cmd->parsed()) {
      auto v_p = try_parse_rational(v_p_text);
      if (!v_p) throw Exit{exit_parse, "malformed rational '" + v_p_text + "'"};
      ResidueCharacteristic p(p_value);
      std::int64_t n = n_value > 0 ? n_value : static_cast<std::int64_t>(p_value);
      write_output(out_path, serialize(model_document(kummer_model(n, p, *v_p))), out);
      return exit_ok;
    }
    if (tate_cmd->parsed()) {
      auto length = try_parse_rational(length_text);
      if (!length) throw Exit{exit_parse, "malformed rational '" + length_text + "'"};
      write_output(out_path, serialize(model_document(tate_model(m_value, *length, ResidueCharacteristic(p_value)))),
                   out);
      return exit_ok;
    }
  } catch (const Exit& e) {
    err << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.kind() == ErrorKind::ParseError ? exit_parse : exit_failed;
  }
  return exit_failed;
}

}  // namespace berkskel
