#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "berkskel/cli.hpp"

using namespace berkskel;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) { return std::string(BERKSKEL_CORPUS_DIR) + "/" + name; }

bool has_failure(const std::string& report, const std::string& check) {
  return report.find("FAIL " + check + " ") != std::string::npos;
}

struct ErrorCase {
  const char* file;
  bool balance;  // check-balance instead of validate
  int code;
  std::vector<const char*> checks;
};

const std::vector<ErrorCase> kErrorCases{
    {"broken_metric", false, 1, {"morphism.metric"}},
    {"malformed_rational", false, 2, {}},
    {"dangling_reference", false, 2, {}},
    {"perturbed_slope", true, 1, {"different.wild_balancing", "different.germ_slope"}},
    {"missing_different", true, 1, {"balance.missing_data"}},
    {"fiber_degree", false, 1, {"morphism.fiber_degree"}},
    {"vertex_edge_balance", false, 1, {"morphism.vertex_edge_balance", "different.germ_multiplicity"}},
    {"type1_degree", false, 1, {"graph.type1_degree"}},
    {"morphism_type", false, 1, {"morphism.type", "morphism.incidence"}},
    {"discontinuous_different", false, 1, {"different.continuity"}},
    {"negative_different", false, 1, {"different.nonnegative"}},
    {"discontinuous_field", false, 1, {"field.continuity"}},
    {"field_slopes", false, 1, {"field.edge_family"}},
    {"off_skeleton_branch", true, 1, {"criterion.off_skeleton_branch"}},
    {"missing_branch", true, 1, {"different.missing_branch"}},
    {"inseparable", true, 1, {"different.inseparable"}},
    {"generic_flag", true, 1, {"criterion.generic_flag", "different.generic_flag"}},
    {"interior_break", true, 1, {"criterion.interior_break"}},
    {"tame_rh", true, 1, {"morphism.tame_local_rh"}},
    {"disconnected", false, 1, {"graph.connected"}},
    {"edge_lengths", false, 1, {"graph.length_positive", "graph.length_type"}},
    {"type1_genus", false, 1, {"graph.type1_genus"}},
    {"no_type2", false, 1, {"graph.type2_vertex"}},
    {"unmapped_vertex", false, 1, {"morphism.vertex_map"}},
    {"unmapped_edge", false, 1, {"morphism.edge_map"}},
    {"bad_multiplicity", false, 1, {"morphism.degree", "morphism.multiplicity"}},
    {"missing_vertex_value", false, 1, {"different.vertex_value"}},
    {"bad_inseparability", false, 1, {"different.inseparability"}},
    {"missing_edge_profile", false, 1, {"different.edge_profile"}},
    {"foreign_germ", false, 1, {"different.germ"}},
    {"ramification_off_vertices", true, 1, {"criterion.ramification"}},
    {"missing_vertex_profile", false, 1, {"field.vertex_profile"}},
    {"crossing_field", false, 1, {"field.edge_family"}},
    {"empty_graph", false, 1, {"graph.nonempty"}},
};

}  // namespace

TEST(Cli, ErrorCorpus) {
  for (const auto& c : kErrorCases) {
    std::string path = corpus(std::string("errors/") + c.file + ".bks");
    auto r = c.balance ? run({"check-balance", path, "--morphism", "f"}) : run({"validate", path});
    EXPECT_EQ(r.code, c.code) << c.file << "\n" << r.out << r.err;
    for (const char* check : c.checks) EXPECT_TRUE(has_failure(r.out, check)) << c.file << " " << check << "\n" << r.out;
  }
}

TEST(Cli, ErrorCorpusIsCovered) {
  // Every file in the error corpus has a row above.
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(corpus("errors"))) {
    if (entry.path().extension() != ".bks") continue;
    ++files;
    std::string stem = entry.path().stem().string();
    bool listed = false;
    for (const auto& c : kErrorCases) listed = listed || stem == c.file;
    EXPECT_TRUE(listed) << stem;
  }
  EXPECT_EQ(files, kErrorCases.size());
}

TEST(Cli, FailureCarriesBothSides) {
  auto metric = run({"validate", corpus("errors/broken_metric.bks")});
  EXPECT_NE(metric.out.find("FAIL morphism.metric [c1,loop]"), std::string::npos) << metric.out;
  EXPECT_NE(metric.out.find("lhs=2 rhs=3"), std::string::npos);
  auto slope = run({"check-balance", corpus("errors/perturbed_slope.bks"), "--morphism", "f"});
  EXPECT_NE(slope.out.find("FAIL different.wild_balancing [gauss]"), std::string::npos) << slope.out;
  EXPECT_NE(slope.out.find("lhs=4 rhs=3"), std::string::npos);
  auto malformed = run({"validate", corpus("errors/malformed_rational.bks")});
  EXPECT_NE(malformed.err.find("line 4"), std::string::npos) << malformed.err;
}

TEST(Cli, ValidModelsPass) {
  for (const char* name : {"kummer_p2", "kummer_p3", "kummer_p5", "kummer_p2_n4", "kummer_tame_n6", "tate_m3"}) {
    auto v = run({"validate", corpus(std::string(name) + ".bks")});
    EXPECT_EQ(v.code, 0) << name << "\n" << v.out << v.err;
    auto b = run({"check-balance", corpus(std::string(name) + ".bks"), "--morphism", "f", "--different", "delta"});
    EXPECT_EQ(b.code, 0) << name << "\n" << b.out << b.err;
    EXPECT_EQ(b.out.find("FAIL"), std::string::npos);
  }
  auto b = run({"check-balance", corpus("kummer_p3.bks"), "--morphism", "f"});
  EXPECT_NE(b.out.find("ok different.wild_balancing [gauss] wild balancing lhs=4 rhs=4"), std::string::npos) << b.out;
  EXPECT_NE(b.out.find("ok rh.global"), std::string::npos) << b.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"validate"}).code, 2);
  EXPECT_EQ(run({"validate", corpus("does_not_exist.bks")}).code, 2);
  EXPECT_EQ(run({"check-balance", corpus("kummer_p3.bks"), "--morphism", "g"}).code, 1);
  EXPECT_EQ(run({"radii", corpus("kummer_p3.bks"), "--field", "phi", "--degree", "1.5"}).code, 2);
  EXPECT_EQ(run({"profile", corpus("kummer_p3.bks"), "--field", "phi", "--at", "to_zero:gauss"}).code, 2);
  EXPECT_EQ(run({"--version"}).code, 0);
}

TEST(Cli, Profile) {
  auto at_vertex = run({"profile", corpus("kummer_p3.bks"), "--field", "phi", "--at", "gauss"});
  EXPECT_EQ(at_vertex.code, 0);
  EXPECT_EQ(at_vertex.out, "pm(0;3;1/2:1)\n");
  auto on_edge = run({"profile", corpus("varying_field.bks"), "--field", "phi", "--at", "e:b:1/2"});
  EXPECT_EQ(on_edge.code, 0) << on_edge.err;
  EXPECT_EQ(on_edge.out, "pm(0;3;3/4:1)\n");
  EXPECT_EQ(run({"profile", corpus("kummer_p3.bks"), "--field", "phi", "--at", "nowhere"}).code, 1);
}

TEST(Cli, RadiiCsv) {
  auto r = run({"radii", corpus("kummer_p3.bks"), "--field", "phi", "--degree", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "location,position,threshold\n"
            "gauss,0,1/2\n"
            "to_infinity,0,1/2\n"
            "to_infinity,inf,1/2\n"
            "to_zero,0,1/2\n"
            "to_zero,inf,1/2\n");
  auto decimal = run({"radii", corpus("kummer_p2_n4.bks"), "--field", "phi", "--degree", "4", "--decimal", "3"});
  EXPECT_NE(decimal.out.find("location,position,threshold,threshold_decimal\n"), std::string::npos);
  EXPECT_NE(decimal.out.find("gauss,0,1/2,0.500\n"), std::string::npos) << decimal.out;
  auto empty = run({"radii", corpus("kummer_p3.bks"), "--field", "phi", "--degree", "4"});
  EXPECT_NE(empty.out.find("gauss,0,empty\n"), std::string::npos) << empty.out;
  auto all = run({"radii", corpus("kummer_p3.bks"), "--field", "phi", "--degree", "1"});
  EXPECT_NE(all.out.find("gauss,0,inf\n"), std::string::npos) << all.out;
  auto varying = run({"radii", corpus("varying_field.bks"), "--field", "phi", "--degree", "3"});
  EXPECT_NE(varying.out.find("e,0,1\ne,1,1/2\n"), std::string::npos) << varying.out;
}

TEST(Cli, RadiiToFile) {
  std::string path = testing::TempDir() + "radii_test.csv";
  auto r = run({"radii", corpus("kummer_p3.bks"), "--field", "phi", "--degree", "3", "--csv", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str().substr(0, 28), "location,position,threshold\n");
  std::remove(path.c_str());
}

TEST(Cli, ComposeProfiles) {
  auto r = run({"compose", corpus("towers.bks"), "--profiles", "lower,upper"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto doc = cli::load(corpus("towers.bks"));
  EXPECT_EQ(r.out, format_pm(doc.profiles.at("tower")) + "\n");
  EXPECT_EQ(run({"compose", corpus("towers.bks"), "--profiles", "lower,missing"}).code, 1);
}

TEST(Cli, ExamplesMatchCorpus) {
  auto read = [](const std::string& path) {
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    return text.str();
  };
  EXPECT_EQ(run({"example", "kummer", "--p", "3"}).out, read(corpus("kummer_p3.bks")));
  EXPECT_EQ(run({"example", "kummer", "--p", "2", "--n", "4"}).out, read(corpus("kummer_p2_n4.bks")));
  EXPECT_EQ(run({"example", "tate", "--m", "3", "--length", "2"}).out, read(corpus("tate_m3.bks")));
  EXPECT_EQ(run({"example", "kummer", "--p", "4"}).code, 1);
  EXPECT_EQ(run({"example", "kummer", "--p", "3", "--v-p", "x"}).code, 2);
}

TEST(Cli, DeterministicOutput) {
  for (const auto& c : kErrorCases) {
    std::string path = corpus(std::string("errors/") + c.file + ".bks");
    std::vector<std::string> args =
        c.balance ? std::vector<std::string>{"check-balance", path, "--morphism", "f"} : std::vector<std::string>{"validate", path};
    auto first = run(args);
    for (int i = 0; i < 3; ++i) {
      auto again = run(args);
      EXPECT_EQ(again.out, first.out);
      EXPECT_EQ(again.err, first.err);
      EXPECT_EQ(again.code, first.code);
    }
  }
}
