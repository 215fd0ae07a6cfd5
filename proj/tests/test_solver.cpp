#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kiri/mesh.hpp"
#include "kiri/shell.hpp"
#include "kiri/solver.hpp"

using namespace kiri;

namespace {

ShellModel cross_model(double edge, double lambda) {
    TriMesh mesh = generate_mesh(KirigamiPattern::cross(60.0, 20.0),
                                 SubstrateShape::square(60.0), edge);
    assign_rest_metrics(mesh, lambda);
    return build_shell_model(std::move(mesh), {{22.1, 1.7}, 1.1}, {{17.9, 84.5}, 1.6}, 0.5);
}

}  // namespace

TEST_CASE("no prestretch: the flat plate is the single stable state") {
    ShellModel model = cross_model(5.0, 1.0);
    std::vector<std::string> failures;
    auto states = find_stable_states(
        model, {SeedKind::GlobalPositive, SeedKind::GlobalNegative}, {}, &failures);
    CHECK(failures.empty());
    REQUIRE(states.size() == 1);
    CHECK(states[0].height / model.length_scale < 1e-6);
    CHECK(states[0].energy_total < 1e-6 * model.c_s * model.length_scale);
}

TEST_CASE("prestretched cross: two mirror-image buckled states") {
    ShellModel model = cross_model(4.0, 1.6);
    std::vector<std::string> failures;
    auto states = find_stable_states(
        model, {SeedKind::GlobalPositive, SeedKind::GlobalNegative}, {}, &failures);
    CHECK(failures.empty());
    REQUIRE(states.size() == 2);
    CHECK(states[0].sign != states[1].sign);
    CHECK(states[0].converged);
    CHECK(states[1].converged);
    for (const auto& st : states) {
        CHECK(st.height / model.length_scale > 0.05);  // genuinely out of plane
        CHECK(st.mode == ModeLabel::Mode1);
        CHECK(st.gradient_norm <= SolverOptions{}.gradient_tolerance(model));
    }
    const double rel = std::abs(states[0].energy_total - states[1].energy_total) /
                       states[0].energy_total;
    CHECK(rel < 1e-9);
}

TEST_CASE("deduplication: repeated seeds collapse to the same state") {
    ShellModel model = cross_model(5.0, 1.6);
    auto states = find_stable_states(
        model, {SeedKind::GlobalPositive, SeedKind::GlobalPositive}, {}, nullptr);
    CHECK(states.size() == 1);
}

TEST_CASE("snap-through drives the buckled state into its mirror image") {
    ShellModel model = cross_model(4.0, 1.6);
    auto states = find_stable_states(
        model, {SeedKind::GlobalPositive, SeedKind::GlobalNegative}, {}, nullptr);
    REQUIRE(states.size() == 2);
    const auto& start =
        states[0].sign == StateSign::Positive ? states[0] : states[1];

    SnapOptions snap;
    snap.control = SnapControl::DisplacementSteps;
    SnapResult result = snap_through(model, start, snap, {});
    CHECK(result.snapped);
    CHECK(result.final_state.sign != start.sign);
    CHECK(result.curve.size() >= 3);

    // at least one negative-stiffness segment: reaction force decreasing
    // while the control displacement increases
    bool has_negative_stiffness = false;
    for (size_t i = 1; i < result.curve.size(); ++i) {
        if (result.curve[i].displacement > result.curve[i - 1].displacement &&
            result.curve[i].force < result.curve[i - 1].force) {
            has_negative_stiffness = true;
            break;
        }
    }
    CHECK(has_negative_stiffness);
}

TEST_CASE("energy classification helpers") {
    ShellModel model = cross_model(5.0, 1.6);
    EquilibriumState st;
    st.positions = model.flat_positions();
    classify_state(model, st);
    CHECK(st.height < 1e-12);
}
