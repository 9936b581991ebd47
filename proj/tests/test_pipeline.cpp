#include "conecrafter/document.hpp"
#include "conecrafter/pipeline.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace conecrafter;
using namespace conecrafter::testing;
using json = nlohmann::ordered_json;

namespace {

const char* kMinimal = R"({
  "schema": "conecrafter/1",
  "name": "minimal",
  "kind": "abelian",
  "lattice_rank": 2,
  "complex_structure": [["0", "-1"], ["1", "0"]],
  "polarization": [[0, 1], [-1, 0]]
})";

json minimal() { return json::parse(kMinimal); }

std::string parse_error_field(const json& j) {
  try {
    parse_document(j.dump());
  } catch (const ParseError& e) {
    return e.field();
  }
  return "<no error>";
}

std::vector<std::string> failed_invariants(const CommandResult& r) {
  std::vector<std::string> out;
  for (const auto& name : r.report["verify"]["failed"]) out.push_back(name.get<std::string>());
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Document, ParsesMinimal) {
  const auto doc = parse_document(kMinimal);
  EXPECT_EQ(doc.name, "minimal");
  EXPECT_EQ(doc.lattice_rank, 2);
  EXPECT_TRUE(doc.group.empty());
  EXPECT_TRUE(doc.test_classes.empty());
  EXPECT_EQ(doc.reduction.samples, 1000u);
  EXPECT_EQ(doc.reduction.seed, 42u);
}

TEST(Document, FieldPathsInErrors) {
  auto j = minimal();
  j["complex_structure"][1][0] = "1/0";
  EXPECT_EQ(parse_error_field(j), "complex_structure[1][0]");

  j = minimal();
  j["lattice_rank"] = 3;
  EXPECT_EQ(parse_error_field(j), "lattice_rank");

  j = minimal();
  j.erase("polarization");
  EXPECT_EQ(parse_error_field(j), "polarization");

  j = minimal();
  j["schema"] = "other/2";
  EXPECT_EQ(parse_error_field(j), "schema");

  j = minimal();
  j["group"] = json::array({{{"linear", {{1, 0}, {0, 1}}}, {"translation", {"0", "x"}}}});
  EXPECT_EQ(parse_error_field(j), "group[0].translation[1]");

  j = minimal();
  j["polarization"][0][1] = "1/2";
  EXPECT_EQ(parse_error_field(j), "polarization[0][1]");

  EXPECT_THROW(parse_document("{ not json"), ParseError);
  EXPECT_THROW(load_document("/nonexistent/file.json"), ParseError);
}

TEST(Pipeline, ClassListParsing) {
  const auto v = parse_class_list("[3, 1/2, -5]");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[1], Rational(1, 2));
  EXPECT_EQ(v[2], Rational(-5));
  EXPECT_THROW(parse_class_list("[1, 1/0]"), Error);
}

TEST(Pipeline, EmptyGroupIsAbelianPass) {
  const auto r = run_command("verify", parse_document(kMinimal), {});
  EXPECT_EQ(r.exit_code, kExitPass);
  EXPECT_FALSE(r.report["validation"]["is_ghv"].get<bool>());
  EXPECT_EQ(r.report["endo"]["end_rank"], 2);
  EXPECT_EQ(r.report["endo"]["end_invariant_rank"], 2);
}

TEST(Pipeline, BiellipticIsGhv) {
  const auto r = run_command("funddom", corpus("bielliptic"), {});
  EXPECT_EQ(r.exit_code, kExitPass);
  EXPECT_TRUE(r.report["validation"]["is_ghv"].get<bool>());
  EXPECT_EQ(r.report["endo"]["end_invariant_rank"], 4);
  EXPECT_EQ(r.report["cone"]["rho_invariant"], 2);
  const auto& fd = r.report["fundamental_domain"];
  EXPECT_EQ(fd["status"], "constructed");
  EXPECT_EQ(fd["domain"]["rays"], json::parse(R"([["1","0"],["0","1"]])"));
  EXPECT_EQ(fd["tiling"]["successes"], 1000);
  EXPECT_TRUE(fd["pushdown"]["pullpush_equals_sum"].get<bool>());
  EXPECT_TRUE(fd["pushdown"]["pushpull_equals_order"].get<bool>());
  EXPECT_EQ(fd["pushdown"]["group_order"], 4);
  EXPECT_TRUE(fd["structural_statement"]["applies"].get<bool>());
}

TEST(Pipeline, TranslationMakesDocumentNonGhv) {
  auto j = json::parse(read_file(corpus_path("bielliptic")));
  j["group"].push_back({{"linear", {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}},
                        {"translation", {"1/2", "0", "0", "0"}}});
  const auto r = run_command("check", parse_document(j.dump()), {});
  EXPECT_FALSE(r.report["validation"]["is_ghv"].get<bool>());
  bool found = false;
  for (const auto& reason : r.report["validation"]["ghv_reasons"]) found |= reason == "contains translation";
  EXPECT_TRUE(found);
}

TEST(Pipeline, CorruptedPolarizationStopsAtValidation) {
  auto j = minimal();
  j["polarization"] = {{0, 0}, {0, 0}};
  const auto r = run_command("cone", parse_document(j.dump()), {});
  EXPECT_EQ(r.exit_code, kExitValidation);
  EXPECT_FALSE(r.report.contains("endo"));
  EXPECT_FALSE(r.report.contains("cone"));
}

TEST(Pipeline, TestClassTableEchoesVerdicts) {
  const auto r = run_command("cone", corpus("ei_x_ei"), {});
  const auto& table = r.report["cone"]["test_classes"];
  ASSERT_EQ(table.size(), 4u);
  const bool ample[] = {true, false, false, false};
  const bool nef[] = {true, true, false, false};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(table[i]["ample"].get<bool>(), ample[i]) << i;
    EXPECT_EQ(table[i]["nef"].get<bool>(), nef[i]) << i;
  }
}

TEST(Pipeline, HermitianWithoutGeneratorsDowngrades) {
  const auto r = run_command("funddom", corpus("ei_x_ei"), {});
  EXPECT_EQ(r.exit_code, kExitTiling);
  EXPECT_NE(r.report["fundamental_domain"]["status"], "constructed");
}

TEST(Pipeline, HyperbolicDocumentTiles) {
  const auto r = run_command("funddom", corpus("hyperbolic"), {});
  EXPECT_EQ(r.exit_code, kExitPass);
  const auto& fd = r.report["fundamental_domain"];
  EXPECT_EQ(fd["domain"]["rays"].size(), 2u);
  EXPECT_EQ(fd["tiling"]["successes"], 1000);
  EXPECT_TRUE(fd["tiling"]["overlap_witness"].is_null());
}

TEST(Pipeline, ReduceCommand) {
  RunOptions options;
  options.reduce_class = parse_class_list("[7, 10, 4]");
  const auto r = run_command("reduce", corpus("p2"), options);
  EXPECT_EQ(r.exit_code, kExitPass);
  EXPECT_EQ(r.report["reduce"]["status"], "reduced");
  EXPECT_EQ(r.report["reduce"]["reduced"], json::parse(R"(["1","0","3"])"));

  options.reduce_class = parse_class_list("[1, 3, 1]");
  EXPECT_EQ(run_command("reduce", corpus("p2"), options).exit_code, kExitValidation);
  EXPECT_EQ(run_command("reduce", corpus("p2"), {}).exit_code, kExitValidation);
}

TEST(Pipeline, SeedIsReportedAndOverridable) {
  RunOptions options;
  options.seed = 7;
  options.samples = 50;
  const auto r = run_command("funddom", corpus("bielliptic"), options);
  EXPECT_EQ(r.report["seed"], 7);
  EXPECT_EQ(r.report["fundamental_domain"]["tiling"]["samples"], 50);
}

TEST(Pipeline, MutationsFailWithNamedInvariant) {
  const std::pair<const char*, const char*> expected[] = {
      {"m01_sign_flip", "polarization_sign"},
      {"m02_block_sign_flip", "polarization_definite"},
      {"m03_zero_translation", "free_action"},
      {"m04_translation_first_factor", "free_action"},
      {"m05_added_translation", "no_translations"},
      {"m06_j_identity", "complex_structure"},
      {"m07_incompatible_polarization", "polarization_compatible"},
      {"m08_nonalternating_polarization", "polarization_alternating"},
      {"m09_nonholomorphic", "automorphism_holomorphic"},
      {"m10_shear", "group_closure"},
  };
  for (const auto& [file, invariant] : expected) {
    const auto r = run_command("verify", corpus(std::string("mutations/") + file), {});
    EXPECT_NE(r.exit_code, kExitPass) << file;
    const auto failed = failed_invariants(r);
    EXPECT_NE(std::find(failed.begin(), failed.end(), invariant), failed.end()) << file;
  }
}

TEST(Pipeline, GoldenReports) {
  const std::string dir = CONECRAFTER_GOLDEN_DIR;
  for (const char* name : {"ei", "ei_x_ei", "ei_x_e2i", "bielliptic", "hyperbolic", "p2", "q8"}) {
    const auto r = run_command("verify", corpus(name), {});
    EXPECT_EQ(r.exit_code, kExitPass) << name;
    const std::string path = dir + "/" + name + ".json";
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(r.report, json::parse(read_file(path))) << name;
  }
}

TEST(Pipeline, ReportsAreDeterministic) {
  const auto a = run_command("verify", corpus("q8"), {});
  const auto b = run_command("verify", corpus("q8"), {});
  EXPECT_EQ(a.report.dump(), b.report.dump());
}
