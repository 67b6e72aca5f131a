// Convergence harness: nested restriction, order fitting, and the two study
// drivers on small, fast scenarios.
//
// The temporal-study magnitude pin freezes a measured value: for the free
// defocusing Gaussian (V = 0, kappa = 1, sigma = 1, M = 128, T = 1) the
// dt = 0.01 row against a dt/8-or-finer self-reference measures about
// 2.3e-6 in L2. The window [1e-6, 6e-6] guards the solver's error *scale*
// against regressions in either direction while leaving room for reference
// placement effects.

#include <cmath>
#include <string>

#include "doctest.h"
#include "gpe/diagnostics.hpp"
#include "gpe/experiments.hpp"
#include "gpe/grid.hpp"
#include "gpe/model.hpp"

using namespace gpe;

namespace {

ScenarioSpec free_defocusing(int m, double T) {
    ScenarioSpec s;
    s.grid = make_grid(-8, 8, -8, 8, m, m);
    s.model.potential = ZeroPotential{};
    s.model.nonlinearity = NonlinearitySpec{1.0, 3.0};
    s.model.initial = GaussianData{1.0};
    s.T = T;
    s.scheme = Scheme::Strang;
    s.label = "V = 0";
    return s;
}

}  // namespace

TEST_CASE("nested_restrict subsamples shared nodes exactly") {
    GridSpec fine = make_grid(-8, 8, -8, 8, 8, 8);
    GridSpec coarse = make_grid(-8, 8, -8, 8, 4, 4);
    Field2D f = make_field(fine);
    for (int iy = 0; iy < 8; ++iy)
        for (int ix = 0; ix < 8; ++ix) f.at(ix, iy) = {ix * 100.0 + iy, 0.0};

    Field2D r = nested_restrict(f, coarse);
    REQUIRE(r.grid == coarse);
    CHECK(r.at(0, 0) == f.at(0, 0));
    CHECK(r.at(1, 0) == f.at(2, 0));
    CHECK(r.at(3, 2) == f.at(6, 4));

    CHECK_THROWS_AS(nested_restrict(f, make_grid(-4, 8, -8, 8, 4, 4)), std::invalid_argument);
    CHECK_THROWS_AS(nested_restrict(f, make_grid(-8, 8, -8, 8, 6, 6)), std::invalid_argument);
}

TEST_CASE("estimate_order recovers exact power laws") {
    std::vector<ConvergenceRow> rows = {{0.25, 3.0 * 0.25 * 0.25},
                                        {0.125, 3.0 * 0.125 * 0.125},
                                        {0.0625, 3.0 * 0.0625 * 0.0625}};
    CHECK(estimate_order(rows) == doctest::Approx(2.0).epsilon(1e-12));

    std::vector<ConvergenceRow> first = {{0.1, 0.07}, {0.05, 0.035}};
    CHECK(estimate_order(first) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(estimate_order({{0.1, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(estimate_order({{0.1, 0.0}, {0.05, 0.1}}), std::domain_error);
}

TEST_CASE("temporal study shows second order and the frozen error scale") {
    ScenarioSpec scn = free_defocusing(128, 1.0);
    ConvergenceTable t = run_temporal_study(scn, {0.01, 0.005}, 128);

    REQUIRE(t.complete);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.axis == StudyAxis::Temporal);
    CHECK(t.rows[0].resolution == 0.01);
    CHECK(t.rows[1].resolution == 0.005);

    // frozen magnitude pin for the coarsest row (see header comment)
    CHECK(t.rows[0].error > 1e-6);
    CHECK(t.rows[0].error < 6e-6);

    const double ratio = t.rows[0].error / t.rows[1].error;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
    REQUIRE(t.fitted_order.has_value());
    CHECK(*t.fitted_order == doctest::Approx(2.0).epsilon(0.1));
    CHECK(t.reference_note.find("dt_min/4") != std::string::npos);
}

TEST_CASE("temporal study rejects non-halving step lists") {
    ScenarioSpec scn = free_defocusing(32, 0.1);
    CHECK_THROWS_AS(run_temporal_study(scn, {0.01, 0.004}, 32), std::invalid_argument);
    CHECK_THROWS_AS(run_temporal_study(scn, {}, 32), std::invalid_argument);
}

TEST_CASE("spatial study of analytic data decays faster than any fixed order") {
    // Gaussian data is entire, so doubling the grid square-roots the error
    // floor; the fitted slope on an h^p scale is far above standard orders.
    ScenarioSpec scn = free_defocusing(32, 0.1);
    ConvergenceTable t = run_spatial_study(scn, {32, 64}, 1e-3);

    REQUIRE(t.complete);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.axis == StudyAxis::Spatial);
    CHECK(t.rows[0].resolution == doctest::Approx(0.5));    // h = 16/32
    CHECK(t.rows[1].resolution == doctest::Approx(0.25));   // h = 16/64
    CHECK(t.rows[1].error < t.rows[0].error);
    CHECK(t.rows[1].error < 1e-9);
    REQUIRE(t.fitted_order.has_value());
    CHECK(*t.fitted_order > 4.0);

    CHECK_THROWS_AS(run_spatial_study(scn, {32, 48}, 1e-3), std::invalid_argument);
}

TEST_CASE("a blow-up mid-study yields an incomplete table, not an error") {
    ScenarioSpec scn;
    scn.grid = make_grid(-8, 8, -8, 8, 32, 32);
    scn.model.potential = QuadraticPotential{1.0, 1.0, 0.3};
    scn.model.nonlinearity = NonlinearitySpec{-12.0, 3.0};
    scn.model.initial = GaussianData{1.0};
    scn.T = 1.0;
    scn.label = "collapsing";

    // the reference run (finest grid) collapses first, so no rows survive
    ConvergenceTable t = run_spatial_study(scn, {32, 64}, 0.005);
    CHECK_FALSE(t.complete);
    CHECK(t.rows.empty());
    CHECK_FALSE(t.fitted_order.has_value());
    CHECK(format_table(t).find("incomplete") != std::string::npos);
}

TEST_CASE("table renderers carry the rows and reference provenance") {
    ConvergenceTable t;
    t.axis = StudyAxis::Temporal;
    t.label = "demo";
    t.rows = {{0.01, 4e-4}, {0.005, 1e-4}};
    t.fitted_order = 2.0;
    t.reference_note = "reference: demo note";

    const std::string text = format_table(t);
    CHECK(text.find("temporal convergence") != std::string::npos);
    CHECK(text.find("demo note") != std::string::npos);
    CHECK(text.find("fitted order") != std::string::npos);

    const std::string csv = table_csv(t);
    CHECK(csv.rfind("resolution,error\n", 0) == 0);
    CHECK(csv.find("0.01,") != std::string::npos);
}
