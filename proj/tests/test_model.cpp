// Potentials, initial data, and the exact pointwise subflow.
//
// The pointwise subflow multiplies each node by a unit-modulus phase, so its
// two defining properties are checked directly: the modulus of every sample
// is preserved to rounding, and on fields/potentials that are constant the
// rotation angle equals -(V + kappa |psi|^{p-1}) dt exactly.

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "doctest.h"
#include "gpe/grid.hpp"
#include "gpe/model.hpp"

using namespace gpe;

namespace {

Field2D constant_field(const GridSpec& g, std::complex<double> v) {
    Field2D f = make_field(g);
    for (auto& x : f.values) x = v;
    return f;
}

Field2D random_field(const GridSpec& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Field2D f = make_field(g);
    for (auto& v : f.values) v = {dist(rng), dist(rng)};
    return f;
}

}  // namespace

TEST_CASE("quadratic potential samples (cx x^2 + cy y^2) / (2 eps)") {
    GridSpec g = make_grid(-8, 8, -8, 8, 16, 16);
    auto v = eval_potential(QuadraticPotential{1.0, 4.0, 0.5}, g);
    REQUIRE(v.size() == g.num_nodes());
    // node (2, 12): x = -6, y = 4
    const double expected = (1.0 * 36.0 + 4.0 * 16.0) / (2.0 * 0.5);
    CHECK(v[12 * 16 + 2] == doctest::Approx(expected).epsilon(1e-15));
    // the origin is a node and the potential vanishes there
    CHECK(v[8 * 16 + 8] == 0.0);

    auto zero = eval_potential(ZeroPotential{}, g);
    for (double z : zero) CHECK(z == 0.0);

    // negative coefficients (inverted / saddle traps) are legal
    auto saddle = eval_potential(QuadraticPotential{1.0, -1.0, 1.0}, g);
    CHECK(saddle[8 * 16 + 2] == doctest::Approx(0.5 * 36.0).epsilon(1e-15));   // (x,y)=(-6,0)
    CHECK(saddle[2 * 16 + 8] == doctest::Approx(-0.5 * 36.0).epsilon(1e-15));  // (x,y)=(0,-6)
}

TEST_CASE("potential validation rejects bad parameters") {
    GridSpec g = make_grid(-8, 8, -8, 8, 16, 16);
    CHECK_THROWS_AS(eval_potential(QuadraticPotential{1.0, 1.0, 0.0}, g), std::invalid_argument);
    CHECK_THROWS_AS(eval_potential(TabulatedPotential{std::vector<double>(7)}, g),
                    std::invalid_argument);
    auto tab = TabulatedPotential{std::vector<double>(g.num_nodes(), 2.5)};
    CHECK(eval_potential(tab, g)[0] == 2.5);
}

TEST_CASE("gaussian data has the (sigma pi)^{-1/2} amplitude and unit mass") {
    GridSpec g = make_grid(-8, 8, -8, 8, 128, 128);
    for (double sigma : {1.0, 0.3}) {
        Field2D f = init_field(GaussianData{sigma}, g);
        // the symmetric domain puts a node exactly at the origin
        CHECK(f.at(64, 64).real() ==
              doctest::Approx(1.0 / std::sqrt(sigma * M_PI)).epsilon(1e-14));
        CHECK(f.at(64, 64).imag() == 0.0);
        CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(init_field(GaussianData{0.0}, g), std::invalid_argument);
    CHECK_THROWS_AS(init_field(GaussianData{-1.0}, g), std::invalid_argument);
}

TEST_CASE("hat data is the pyramid (8-|x|)(8-|y|)") {
    GridSpec g = make_grid(-8, 8, -8, 8, 32, 32);
    Field2D f = init_field(HatData{}, g);
    CHECK(f.at(16, 16).real() == 64.0);  // origin: 8*8
    CHECK(f.at(8, 16).real() == 32.0);   // (-4, 0): 4*8
    CHECK(f.at(0, 0).real() == 0.0);     // corner node (-8,-8)
    for (const auto& v : f.values) CHECK(v.imag() == 0.0);
}

TEST_CASE("custom data must match the grid size") {
    GridSpec g = make_grid(-8, 8, -8, 8, 16, 16);
    CHECK_THROWS_AS(init_field(CustomData{std::vector<std::complex<double>>(3)}, g),
                    std::invalid_argument);
    std::vector<std::complex<double>> vals(g.num_nodes(), {1.0, -2.0});
    Field2D f = init_field(CustomData{vals}, g);
    CHECK(f.at(5, 7) == std::complex<double>(1.0, -2.0));
}

TEST_CASE("pointwise subflow applies the exact phase on constant data") {
    GridSpec g = make_grid(-8, 8, -8, 8, 8, 8);
    const std::complex<double> v0(1.2, -0.7);
    const double amp2 = std::norm(v0);
    const double dt = 0.013;

    struct Case {
        double kappa, p, vpot;
    };
    for (const Case& cse : {Case{1.0, 3.0, 0.8}, Case{-1.9718, 3.0, 0.0}, Case{0.5, 5.0, -0.3},
                            Case{2.0, 2.0, 1.1}, Case{1.0, 1.0, 0.0}, Case{0.0, 3.0, 2.0}}) {
        Field2D f = constant_field(g, v0);
        std::vector<double> pot(g.num_nodes(), cse.vpot);
        potential_nonlinear_step_inplace(f, pot, NonlinearitySpec{cse.kappa, cse.p}, dt);
        const double angle = -(cse.vpot + cse.kappa * std::pow(amp2, 0.5 * (cse.p - 1.0))) * dt;
        const std::complex<double> expected = v0 * std::polar(1.0, angle);
        for (const auto& v : f.values) CHECK(std::abs(v - expected) < 1e-15);
    }
}

TEST_CASE("pointwise subflow preserves the modulus of every sample") {
    GridSpec g = make_grid(-8, 8, -8, 8, 32, 32);
    Field2D f = random_field(g, 2024);
    Field2D before = f;
    auto pot = eval_potential(QuadraticPotential{1.0, 4.0, 1.0}, g);
    potential_nonlinear_step_inplace(f, pot, NonlinearitySpec{-3.0, 3.5}, 0.09);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(std::abs(f.values[i]) ==
              doctest::Approx(std::abs(before.values[i])).epsilon(1e-14));
    CHECK(l2_norm(f) == doctest::Approx(l2_norm(before)).epsilon(1e-14));
}

TEST_CASE("pointwise subflow is reversible and vanishing data stays zero") {
    GridSpec g = make_grid(-8, 8, -8, 8, 16, 16);
    Field2D f = random_field(g, 7);
    f.at(3, 3) = 0.0;  // exercise the |psi| = 0 corner of the general-p path
    auto pot = eval_potential(QuadraticPotential{2.0, 1.0, 0.7}, g);
    const NonlinearitySpec nl{1.5, 2.2};
    Field2D fwd = potential_nonlinear_step(f, pot, nl, 0.05);
    CHECK(fwd.at(3, 3) == std::complex<double>(0.0, 0.0));
    Field2D back = potential_nonlinear_step(fwd, pot, nl, -0.05);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        worst = std::max(worst, std::abs(back.values[i] - f.values[i]));
    CHECK(worst < 1e-14);
}

TEST_CASE("nonlinearity validation") {
    CHECK_NOTHROW(validate_nonlinearity(NonlinearitySpec{-40.0, 1.0}));
    CHECK_THROWS_AS(validate_nonlinearity(NonlinearitySpec{1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(
        validate_nonlinearity(NonlinearitySpec{std::numeric_limits<double>::infinity(), 3.0}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        validate_nonlinearity(NonlinearitySpec{1.0, std::numeric_limits<double>::quiet_NaN()}),
        std::invalid_argument);
}
