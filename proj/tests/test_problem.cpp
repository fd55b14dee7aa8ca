#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "binn/problem.hpp"

using namespace binn;

TEST_CASE("affine expression parser") {
    SUBCASE("constants and coordinates") {
        AffineExpr e = parse_affine_expr("1000*y");
        CHECK(e.c == 0.0);
        CHECK(e.cx == 0.0);
        CHECK(e.cy == 1000.0);
        CHECK(e.eval({0.0, 0.05}) == doctest::Approx(50.0));

        e = parse_affine_expr("-0.5 + 2*x - 3 * y");
        CHECK(e.c == -0.5);
        CHECK(e.cx == 2.0);
        CHECK(e.cy == -3.0);

        e = parse_affine_expr("1e-3");
        CHECK(e.c == doctest::Approx(1e-3));

        e = parse_affine_expr("x*2*3");
        CHECK(e.cx == 6.0);

        e = parse_affine_expr("-(x - 1)");
        CHECK(e.cx == -1.0);
        CHECK(e.c == 1.0);
    }
    SUBCASE("non-affine and malformed input") {
        CHECK_THROWS_AS(parse_affine_expr("x*y"), SpecError);
        CHECK_THROWS_AS(parse_affine_expr("x*x"), SpecError);
        CHECK_THROWS_AS(parse_affine_expr("1 +"), SpecError);
        CHECK_THROWS_AS(parse_affine_expr("z"), SpecError);
        CHECK_THROWS_AS(parse_affine_expr("(1"), SpecError);
        CHECK_THROWS_AS(parse_affine_expr("1 2"), SpecError);
    }
}

namespace {

const char* kMinimalSpec = R"json({
  "spec_version": 1,
  "name": "square",
  "material": {"E": 2000.0, "nu": 0.3, "mode": "plane_strain"},
  "geometry": {
    "segments": [
      {"id": "bottom", "kind": "line", "from": [-0.5, -0.5], "to": [0.5, -0.5], "elements": 5},
      {"id": "right",  "kind": "line", "from": [0.5, -0.5],  "to": [0.5, 0.5],  "elements": 5},
      {"id": "top",    "kind": "line", "from": [0.5, 0.5],   "to": [-0.5, 0.5], "elements": 5},
      {"id": "left",   "kind": "line", "from": [-0.5, 0.5],  "to": [-0.5, -0.5],"elements": 5}
    ]
  },
  "boundary_conditions": [
    {"segment": "bottom", "t1": 0, "u2": 0},
    {"segment": "right",  "t1": 0, "t2": 0},
    {"segment": "top",    "t1": 0, "t2": 1.0},
    {"segment": "left",   "t1": 0, "t2": 0}
  ],
  "point_constraints": [
    {"segment": "bottom", "near": [0, -0.5], "set": "u1", "value": 0}
  ]
})json";

std::string patched(const std::string& from, const std::string& to) {
    std::string s = kMinimalSpec;
    auto at = s.find(from);
    REQUIRE(at != std::string::npos);
    return s.replace(at, from.size(), to);
}

} // namespace

TEST_CASE("problem parsing") {
    ProblemSpec spec = parse_problem(kMinimalSpec);
    CHECK(spec.name == "square");
    CHECK(spec.material.E == 2000.0);
    CHECK(spec.segments.size() == 4);
    CHECK(spec.segment_bcs.size() == 4);
    CHECK(spec.point_constraints.size() == 1);
    CHECK(spec.network.hidden == std::vector<int>{20, 20, 20});
    CHECK(spec.training.iterations == 5000);
    CHECK(spec.training.learning_rate == 1e-3);
    CHECK(spec.quadrature.order == 16);

    SUBCASE("validates cleanly") {
        CHECK(validate_problem(spec).empty());
    }
    SUBCASE("expressions may be strings") {
        ProblemSpec s2 = parse_problem(patched("\"t2\": 1.0", "\"t2\": \"2*y + 1\""));
        CHECK(s2.segment_bcs[2].value2.cy == 2.0);
        CHECK(s2.segment_bcs[2].value2.c == 1.0);
    }
}

TEST_CASE("problem schema diagnostics") {
    SUBCASE("not json") {
        CHECK_THROWS_AS(parse_problem("not json at all"), SpecError);
    }
    SUBCASE("missing spec_version") {
        CHECK_THROWS_AS(parse_problem("{}"), SpecError);
    }
    SUBCASE("wrong version") {
        CHECK_THROWS_AS(parse_problem(R"({"spec_version": 2})"), SpecError);
    }
    SUBCASE("missing material field") {
        CHECK_THROWS_WITH_AS(parse_problem(patched("\"nu\": 0.3, ", "")),
                             doctest::Contains("material"), SpecError);
    }
    SUBCASE("double direction specification") {
        CHECK_THROWS_AS(parse_problem(patched("\"t1\": 0, \"u2\": 0", "\"t1\": 0, \"u1\": 0")),
                        SpecError);
    }
    SUBCASE("unknown bc field") {
        CHECK_THROWS_AS(
            parse_problem(patched("{\"segment\": \"left\",   \"t1\": 0, \"t2\": 0}",
                                  "{\"segment\": \"left\", \"t1\": 0, \"t2\": 0, \"bogus\": 1}")),
            SpecError);
    }
    SUBCASE("bad point constraint target") {
        CHECK_THROWS_AS(parse_problem(patched("\"set\": \"u1\"", "\"set\": \"w1\"")), SpecError);
    }
    SUBCASE("bad segment kind") {
        CHECK_THROWS_AS(parse_problem(patched("\"kind\": \"line\", \"from\": [-0.5, -0.5]",
                                              "\"kind\": \"spline\", \"from\": [-0.5, -0.5]")),
                        SpecError);
    }
}

TEST_CASE("validate_problem catches geometry and posedness issues") {
    SUBCASE("unclosed loop") {
        // Drop the left edge: loop cannot close.
        std::string s = patched(
            R"json({"id": "left",   "kind": "line", "from": [-0.5, 0.5],  "to": [-0.5, -0.5],"elements": 5})json",
            R"json({"id": "left",   "kind": "line", "from": [-0.5, 0.5],  "to": [-0.6, -0.5],"elements": 5})json");
        ProblemSpec spec = parse_problem(s);
        auto issues = validate_problem(spec);
        REQUIRE(!issues.empty());
        CHECK(issues[0].find("geometry") != std::string::npos);
    }
    SUBCASE("rigid modes unpinned") {
        // Remove the u2 constraint from the bottom edge.
        std::string s = patched("\"t1\": 0, \"u2\": 0", "\"t1\": 0, \"t2\": 0");
        ProblemSpec spec = parse_problem(s);
        auto issues = validate_problem(spec);
        REQUIRE(!issues.empty());
        CHECK(issues[0].find("well-posedness") != std::string::npos);
    }
}

TEST_CASE("shipped problem files parse and validate") {
    for (const char* name : {"beam.spec", "holes.spec"}) {
        ProblemSpec spec = load_problem(std::string(BINN_SPECS_DIR) + "/" + name);
        CHECK(validate_problem(spec).empty());
    }
    ProblemSpec beam = load_problem(std::string(BINN_SPECS_DIR) + "/beam.spec");
    CHECK(beam.benchmark == "pure_bending");
    // 180 elements, 540 nodes.
    int elements = 0;
    for (const auto& s : beam.segments) elements += s.n_elements;
    CHECK(elements == 180);
    CHECK(beam.network.hidden == std::vector<int>{20, 20, 20});
    CHECK(beam.network.activation == Activation::Tanh);
    CHECK(beam.training.iterations == 5000);

    ProblemSpec holes = load_problem(std::string(BINN_SPECS_DIR) + "/holes.spec");
    elements = 0;
    for (const auto& s : holes.segments) elements += s.n_elements;
    CHECK(elements == 125); // 4*20 outer + 3*15 holes -> 375 nodes
    CHECK(holes.network.hidden == std::vector<int>{30, 30, 30, 30});
    CHECK(holes.network.activation == Activation::Swish);
}
