#pragma once

// Everything in the equation except psi itself:
//
//   i psi_t = -1/2 Lap psi + V psi + kappa |psi|^{p-1} psi
//
// potentials V, the power nonlinearity (kappa, p), initial data, and the
// exact pointwise subflow for the V + nonlinearity part.

#include <complex>
#include <variant>
#include <vector>

#include "gpe/grid.hpp"

namespace gpe {

// V = 0 everywhere.
struct ZeroPotential {
    friend bool operator==(const ZeroPotential&, const ZeroPotential&) = default;
};

// Anisotropic quadratic potential V(x,y) = (cx*x^2 + cy*y^2) / (2*eps).
// Positive coefficients confine (harmonic trap), negative ones repel
// (inverted trap); eps scales the overall trap stiffness.
struct QuadraticPotential {
    double cx = 1.0;
    double cy = 1.0;
    double eps = 1.0;
    friend bool operator==(const QuadraticPotential&, const QuadraticPotential&) = default;
};

// Arbitrary V sampled on the grid (row-major, x fastest), for callers that
// build potentials outside the quadratic family.
struct TabulatedPotential {
    std::vector<double> values;
    friend bool operator==(const TabulatedPotential&, const TabulatedPotential&) = default;
};

using PotentialSpec = std::variant<ZeroPotential, QuadraticPotential, TabulatedPotential>;

// kappa < 0 is attractive (focusing), kappa > 0 repulsive (defocusing);
// p is the nonlinearity power (p = 3 is the cubic GPE).
struct NonlinearitySpec {
    double kappa = 1.0;
    double p = 3.0;
    friend bool operator==(const NonlinearitySpec&, const NonlinearitySpec&) = default;
};

// Unit-mass Gaussian g_sigma = (sigma*pi)^{-1/2} exp(-(x^2+y^2)/(2 sigma)).
struct GaussianData {
    double sigma = 1.0;
    friend bool operator==(const GaussianData&, const GaussianData&) = default;
};

// Pyramid-shaped H^1 data h(x,y) = (8-|x|)(8-|y|): continuous, kinked along
// the axes, with ||h||_2 = 1024/3 on [-8,8]^2.
struct HatData {
    friend bool operator==(const HatData&, const HatData&) = default;
};

// Caller-supplied samples (row-major, x fastest).
struct CustomData {
    std::vector<std::complex<double>> values;
    friend bool operator==(const CustomData&, const CustomData&) = default;
};

using InitialDataSpec = std::variant<GaussianData, HatData, CustomData>;

struct ModelSpec {
    PotentialSpec potential = ZeroPotential{};
    NonlinearitySpec nonlinearity{};
    InitialDataSpec initial = GaussianData{};
    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Samples V on the grid (row-major, x fastest). Throws std::invalid_argument
// for eps = 0, non-finite coefficients, or a tabulated size mismatch.
std::vector<double> eval_potential(const PotentialSpec& potential, const GridSpec& grid);

// Samples the initial data on the grid.
Field2D init_field(const InitialDataSpec& initial, const GridSpec& grid);

// Exact solution of the pointwise subflow i psi_t = (V + kappa |psi|^{p-1}) psi
// over time dt: since the multiplier is real, |psi| is constant along the flow
// and the update is the phase rotation
//   psi <- psi * exp(-i (V + kappa |psi|^{p-1}) dt).
// Preserves pointwise modulus exactly (hence discrete mass, up to rounding).
Field2D potential_nonlinear_step(const Field2D& f, const std::vector<double>& potential,
                                 const NonlinearitySpec& nl, double dt);

// In-place variant used by the time stepper's inner loop.
void potential_nonlinear_step_inplace(Field2D& f, const std::vector<double>& potential,
                                      const NonlinearitySpec& nl, double dt);

// Validation helper shared by parse paths: throws std::invalid_argument if
// nl.p < 1 or any parameter is non-finite.
void validate_nonlinearity(const NonlinearitySpec& nl);

}  // namespace gpe
