#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kiri/config.hpp"

using namespace kiri;

TEST_CASE("empty document yields the reference defaults") {
    const StudyConfig c = parse_config("{}");
    CHECK(c.substrate_layer.material.c1 == doctest::Approx(22.1));
    CHECK(c.substrate_layer.thickness == doctest::Approx(1.1));
    CHECK(c.face_layer.material.c2 == doctest::Approx(84.5));
    CHECK(c.face_layer.thickness == doctest::Approx(1.6));
    CHECK(c.prestretch == doctest::Approx(1.6));
    CHECK(c.substrate_size == doctest::Approx(60.0));
    CHECK(c.arm_width == doctest::Approx(20.0));
    CHECK(c.poisson == doctest::Approx(0.5));
    CHECK(c.shape_law == ShapeLaw::Pyramid);
}

TEST_CASE("partial documents override only their keys") {
    const StudyConfig c = parse_config(R"({
        "prestretch": 1.8,
        "geometry": {"substrate_size_mm": 80.0},
        "face_material": "face_b"
    })");
    CHECK(c.prestretch == doctest::Approx(1.8));
    CHECK(c.substrate_size == doctest::Approx(80.0));
    CHECK(c.arm_length == doctest::Approx(60.0));  // untouched default
    CHECK(c.face_layer.material.c1 == doctest::Approx(-2.6));
    CHECK(c.face_layer.thickness == doctest::Approx(1.4));
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"prestrech": 1.8})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"geometry": {"arm": 10}})"), ConfigError);
}

TEST_CASE("custom materials can be added and selected") {
    const StudyConfig c = parse_config(R"({
        "materials": {"gel": {"c1_kpa": 5.0, "c2_kpa": 1.0, "thickness_mm": 0.8}},
        "substrate_material": "gel"
    })");
    CHECK(c.substrate_layer.material.c1 == doctest::Approx(5.0));
    CHECK(c.substrate_layer.thickness == doctest::Approx(0.8));
}

TEST_CASE("referencing a missing material fails") {
    CHECK_THROWS_AS(parse_config(R"({"face_material": "unobtainium"})"), ConfigError);
}

TEST_CASE("validation rejects out-of-range values") {
    CHECK_THROWS_AS(parse_config(R"({"prestretch": 0.5})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"poisson": 0.7})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"geometry": {"substrate_shape": "hexagon"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"simulation": {"mesh_edge_length_mm": -1}})"), ConfigError);
}

TEST_CASE("dotted overrides") {
    StudyConfig c = parse_config("{}");
    apply_override(c, "prestretch=1.9");
    apply_override(c, "geometry.arm_width_mm=15");
    apply_override(c, "simulation.mesh_edge_length_mm=3.5");
    apply_override(c, "shape_law=\"cap\"");
    CHECK(c.prestretch == doctest::Approx(1.9));
    CHECK(c.arm_width == doctest::Approx(15.0));
    CHECK(c.mesh_edge_length == doctest::Approx(3.5));
    CHECK(c.shape_law == ShapeLaw::SphericalCap);
    CHECK_THROWS_AS(apply_override(c, "nonsense.path=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "no_equals_sign"), ConfigError);
}

TEST_CASE("bare-string overrides work for enum-like fields") {
    StudyConfig c = parse_config("{}");
    apply_override(c, "geometry.pattern=none");
    CHECK(c.pattern == "none");
}

TEST_CASE("round trip through config_to_json") {
    StudyConfig c = parse_config(R"({"prestretch": 1.75, "seed": 42})");
    const StudyConfig c2 = parse_config(config_to_json(c));
    CHECK(c2.prestretch == doctest::Approx(1.75));
    CHECK(c2.seed == 42);
    CHECK(config_to_json(c) == config_to_json(c2));
}

TEST_CASE("derived builders scale with size") {
    const StudyConfig c = parse_config("{}");
    const SubstrateShape s = c.substrate_for_size(90.0);
    CHECK(s.side == doctest::Approx(90.0));
    const KirigamiPattern p = c.kirigami_pattern_for_size(90.0);
    CHECK(p.arm_length == doctest::Approx(90.0));
    CHECK(p.arm_width == doctest::Approx(30.0));  // fixed L/w = 3
    const TrilayerSpec t = c.trilayer(5.0 / 9.0);
    CHECK(t.coverage == doctest::Approx(5.0 / 9.0));
    CHECK(t.prestretch == doctest::Approx(1.6));
}
