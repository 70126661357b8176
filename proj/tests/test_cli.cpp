// SPDX-License-Identifier: Apache-2.0
#include "polyref/cli/run.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace polyref;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string scene_path(const std::string& name) { return std::string(POLYREF_SCENES_DIR) + "/" + name; }

Scene load(const std::string& name) { return parse_scene(slurp(scene_path(name))); }

const char* kMinimal = R"({
  "version": 1,
  "dimension": 2,
  "scatterer": {"obstacles": [{"id": "square", "vertices": [[-0.5,-0.5],[0.5,-0.5],[0.5,0.5],[-0.5,0.5]]}]},
  "waves": [{"id": "w1", "family": "acoustic", "omega": 2.0, "d": [1.0, 0.0]}],
  "plan": {"allowed_bcs": ["dirichlet"]}
})";

json minimal() { return json::parse(kMinimal); }

int run_cli(const std::string& args) {
    const std::string cmd = std::string(POLYREF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string p = testing::TempDir() + "polyref_cli_" + name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

// Length of the common part of two segments; 0 unless they are collinear.
double collinear_overlap(const Vec& a0, const Vec& a1, const Vec& b0, const Vec& b1) {
    const Vec t = (a1 - a0).normalized();
    auto off_line = [&](const Vec& p) {
        const Vec r = p - a0;
        return std::abs(r(0) * t(1) - r(1) * t(0));
    };
    if (off_line(b0) > 1e-12 || off_line(b1) > 1e-12) return 0.0;
    const double alo = 0.0, ahi = (a1 - a0).norm();
    double blo = (b0 - a0).dot(t), bhi = (b1 - a0).dot(t);
    if (blo > bhi) std::swap(blo, bhi);
    return std::max(0.0, std::min(ahi, bhi) - std::max(alo, blo));
}

}  // namespace

TEST(ParseScene, MinimalRoundTripsCanonically) {
    const Scene sc = parse_scene(kMinimal);
    const std::string canon = canonical_scene_text(sc);
    EXPECT_EQ(canonical_scene_text(parse_scene(canon)), canon);
    EXPECT_EQ(canon, slurp(scene_path("dirichlet_minimal.json")));
    ASSERT_EQ(sc.scatterer.obstacles.size(), 1u);
    ASSERT_EQ(sc.waves.size(), 1u);
}

TEST(ParseScene, NonUnitDirectionNamesTheWave) {
    json j = minimal();
    j["waves"][0]["id"] = "probe";
    j["waves"][0]["d"] = {1.0, 0.1};
    try {
        parse_scene(j.dump());
        FAIL() << "expected InvariantError";
    } catch (const InvariantError& e) {
        EXPECT_NE(e.element().find("probe"), std::string::npos) << e.what();
    }
}

TEST(ParseScene, CoincidentScreensRejected) {
    const Vec a0 = vec2(-1.0, 0.3), a1 = vec2(1.0, 0.3);
    ASSERT_GT(collinear_overlap(a0, a1, a0, a1), 1.0);
    json j = {{"version", 1}, {"dimension", 2}};
    j["scatterer"]["screens"] = {{{"id", "s1"}, {"vertices", {{-1.0, 0.3}, {1.0, 0.3}}}},
                                 {{"id", "s2"}, {"vertices", {{-1.0, 0.3}, {1.0, 0.3}}}}};
    try {
        parse_scene(j.dump());
        FAIL() << "expected InvariantError";
    } catch (const InvariantError& e) {
        EXPECT_NE(e.element().find("s1"), std::string::npos);
        EXPECT_NE(e.invariant().find("disjoint"), std::string::npos);
    }
}

TEST(ParseScene, PartiallyOverlappingScreensRejectedTouchingAccepted) {
    const Vec a0 = vec2(0, 0), a1 = vec2(1, 0), b0 = vec2(0.5, 0), b1 = vec2(2, 0), c0 = vec2(1, 0), c1 = vec2(2, 0);
    ASSERT_GT(collinear_overlap(a0, a1, b0, b1), 0.0);
    ASSERT_EQ(collinear_overlap(a0, a1, c0, c1), 0.0);
    json j = {{"version", 1}, {"dimension", 2}};
    j["scatterer"]["screens"] = {{{"id", "a"}, {"vertices", {{0, 0}, {1, 0}}}},
                                 {{"id", "b"}, {"vertices", {{0.5, 0}, {2, 0}}}}};
    EXPECT_THROW(parse_scene(j.dump()), InvariantError);
    j["scatterer"]["screens"][1]["vertices"] = {{1, 0}, {2, 0}};
    EXPECT_NO_THROW(parse_scene(j.dump()));
}

TEST(ParseScene, SchemaViolationsCarryPaths) {
    json j = minimal();
    j["waves"][0]["colour"] = "red";
    try {
        parse_scene(j.dump());
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("/waves/0/colour"), std::string::npos) << e.what();
    }
    j = minimal();
    j["extra"] = 1;
    EXPECT_THROW(parse_scene(j.dump()), ParseError);
    j = minimal();
    j["version"] = 2;
    EXPECT_THROW(parse_scene(j.dump()), ParseError);
    j = minimal();
    j["waves"][0]["omega"] = "fast";
    EXPECT_THROW(parse_scene(j.dump()), ParseError);
}

TEST(ParseScene, SyntaxErrorReported) {
    EXPECT_THROW(parse_scene("{\"version\": 1,"), ParseError);
    EXPECT_THROW(parse_scene(""), ParseError);
}

TEST(ParseScene, DuplicateIdsRejected) {
    json j = minimal();
    j["waves"][0]["id"] = "square";
    EXPECT_THROW(parse_scene(j.dump()), ParseError);
}

TEST(ParseScene, HalfspaceObstacleMatchesVertexForm) {
    json j = minimal();
    j["scatterer"]["obstacles"][0].erase("vertices");
    j["scatterer"]["obstacles"][0]["halfspaces"] = {{{"normal", {1, 0}}, {"offset", 0.5}},
                                                    {{"normal", {-1, 0}}, {"offset", 0.5}},
                                                    {{"normal", {0, 1}}, {"offset", 0.5}},
                                                    {{"normal", {0, -1}}, {"offset", 0.5}}};
    const Scene a = parse_scene(j.dump()), b = parse_scene(kMinimal);
    EXPECT_NEAR(bounding_radius(a.scatterer), bounding_radius(b.scatterer), 1e-12);
    EXPECT_EQ(a.scatterer.obstacles[0].polygon().size(), 4u);
}

TEST(ParseScene, ElasticComplexAmplitudes) {
    json j = {{"version", 1}, {"dimension", 3}};
    j["waves"] = {{{"id", "e"},
                   {"family", "elastic"},
                   {"omega", 1.5},
                   {"lambda", 1.0},
                   {"mu", 1.0},
                   {"rho", 1.0},
                   {"d", {0, 0, 1}},
                   {"q", {1, 0, 0}},
                   {"cp", {0.6, 0.0}},
                   {"cs", {0.0, 0.8}}}};
    const Scene sc = parse_scene(j.dump());
    const auto& w = std::get<ElasticWave>(sc.waves[0].wave);
    EXPECT_DOUBLE_EQ(w.cs.imag(), 0.8);
    EXPECT_EQ(canonical_scene_text(parse_scene(canonical_scene_text(sc))), canonical_scene_text(sc));
}

TEST(Run, CertifyDirichletMinimal) {
    const RunOutcome out = run("certify", parse_scene(kMinimal));
    const json& r = out.report["results"];
    EXPECT_EQ(r["verdict"], "holds");
    EXPECT_EQ(r["margin"].get<double>(), 1.0);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_EQ(out.report["command"], "certify");
    EXPECT_EQ(out.report["version"], version_string);
}

TEST(Run, GroupPiOverFour) {
    const json r = run("group", load("group_pi4.json")).report["results"];
    EXPECT_EQ(r["planes"].size(), 4u);
    EXPECT_EQ(r["order"], 8);
    EXPECT_EQ(r["sectors"], 8);
    EXPECT_EQ(r["status"], "finite");
}

TEST(Run, GroupParallelPairExceedsCap) {
    const json r = run("group", load("group_parallel.json")).report["results"];
    EXPECT_NE(r["status"], "finite");
}

TEST(Run, TraceSymmetricSquares) {
    const json r = run("trace", load("trace/01_symmetric_squares.json")).report["results"];
    EXPECT_EQ(r["iterations"], 1);
    ASSERT_TRUE(r.contains("witness"));
    const Vec n = vec2(r["witness"]["normal"][0], r["witness"]["normal"][1]);
    EXPECT_NEAR(std::abs(n(0)), 1.0, 1e-12);
    EXPECT_NEAR(r["witness"]["offset"].get<double>(), 0.0, 1e-12);
}

TEST(Run, TraceCapGivesExitFour) {
    RunFlags f;
    f.max_iters = 1;
    const RunOutcome out = run("trace", load("trace/04_bounded_first.json"), f);
    EXPECT_EQ(out.exit_code, 4);
    EXPECT_TRUE(out.report["results"].contains("failure"));
}

TEST(Run, FacesCube) {
    const json r = run("faces", load("cube_faces.json")).report["results"];
    EXPECT_EQ(r["counts"], json({8, 12, 6}));
    EXPECT_TRUE(r["vertex_span_property"].get<bool>());
}

TEST(Run, ReflectCheckPasses) {
    const json r = run("reflect-check", load("acoustic_reflect_check.json")).report["results"];
    EXPECT_TRUE(r["all_pass"].get<bool>());
}

TEST(Run, ReportRoundTripsLosslessly) {
    for (const char* cmd : {"certify", "certify-obstacle"}) {
        const json rep = run(cmd, load("em_mixed_two.json")).report;
        const std::string text = rep.dump(2);
        EXPECT_EQ(json::parse(text), rep);
        EXPECT_EQ(json::parse(text).dump(2), text);
    }
}

TEST(Run, DigestTracksCanonicalScene) {
    const json a = run("group", load("group_pi4.json")).report;
    json j = json::parse(slurp(scene_path("group_pi4.json")));
    const json b = run("group", parse_scene(j.dump())).report;  // compact text, same scene
    EXPECT_EQ(a["input_digest"], b["input_digest"]);
    j["reflections"][1]["offset"] = 0.25;
    const json c = run("group", parse_scene(j.dump())).report;
    EXPECT_NE(a["input_digest"], c["input_digest"]);
}

TEST(Render, EmptySceneHasFrameOnly) {
    const Scene sc = parse_scene(R"({"version": 1, "dimension": 2})");
    const std::string svg = render_svg(sc);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("class=\"frame\""), std::string::npos);
    EXPECT_EQ(svg.find("<polygon"), std::string::npos);
    EXPECT_EQ(svg.find("<line class"), std::string::npos);
    EXPECT_NE(svg.find("viewBox=\"-2.000000 -2.000000 4.000000 4.000000\""), std::string::npos);
}

TEST(Render, SquarePlusLine) {
    json j = minimal();
    j["reflections"] = {{{"id", "mirror"}, {"normal", {1, 0}}, {"offset", 0.0}}};
    const std::string svg = render_svg(parse_scene(j.dump()));
    EXPECT_NE(svg.find("<polygon class=\"obstacle\""), std::string::npos);
    EXPECT_NE(svg.find("<line class=\"reflection\""), std::string::npos);
}

TEST(Render, TraceRenderIsDeterministic) {
    const Scene sc = load("trace/04_bounded_first.json");
    RunFlags f;
    f.want_svg = true;
    const RunOutcome a = run("trace", sc, f), b = run("trace", sc, f);
    ASSERT_TRUE(a.svg && b.svg);
    EXPECT_EQ(*a.svg, *b.svg);
    EXPECT_EQ(a.report.dump(), b.report.dump());
    EXPECT_NE(a.svg->find("class=\"flat-point\""), std::string::npos);
    EXPECT_NE(a.svg->find("class=\"witness\""), std::string::npos);
}

TEST(Render, ThreeDimensionalRejected) {
    EXPECT_THROW(render_svg(load("cube_faces.json")), PreconditionError);
}

TEST(Cli, ExitCodes) {
    const std::string ok = scene_path("dirichlet_minimal.json");
    EXPECT_EQ(run_cli("certify --scene " + ok), 0);
    EXPECT_EQ(run_cli("frobnicate --scene " + ok), 1);
    EXPECT_EQ(run_cli("certify"), 1);
    EXPECT_EQ(run_cli("certify --scene /nonexistent/scene.json"), 1);
    EXPECT_EQ(run_cli("render --scene " + ok), 1);
    EXPECT_EQ(run_cli("certify --scene " + write_temp("syntax.json", "{\"version\": ")), 2);
    json j = minimal();
    j["bogus"] = true;
    EXPECT_EQ(run_cli("certify --scene " + write_temp("schema.json", j.dump())), 2);
    j = minimal();
    j["waves"][0]["d"] = {2.0, 0.0};
    EXPECT_EQ(run_cli("certify --scene " + write_temp("invariant.json", j.dump())), 3);
    EXPECT_EQ(run_cli("trace --max-iters 1 --scene " + scene_path("trace/04_bounded_first.json")), 4);
}

TEST(Cli, OutAndSvgFiles) {
    const std::string out = testing::TempDir() + "polyref_cli_report.json";
    const std::string svg = testing::TempDir() + "polyref_cli_drawing.svg";
    ASSERT_EQ(run_cli("render --scene " + scene_path("trace/01_symmetric_squares.json") + " --out " + out +
                      " --svg " + svg),
              0);
    const json rep = json::parse(slurp(out));
    const std::string drawing = slurp(svg);
    EXPECT_EQ(rep["results"]["svg_bytes"].get<std::size_t>(), drawing.size());
    EXPECT_TRUE(rep["results"].contains("trace"));
}
