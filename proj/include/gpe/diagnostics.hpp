#pragma once

// Conserved-quantity evaluation, error norms, max-density tracking, and the
// blow-up detector.

#include <vector>

#include "gpe/grid.hpp"
#include "gpe/model.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;         // l2_norm of the field
    double energy = 0.0;       // E(t), see energy() below
    double max_density = 0.0;  // max over nodes of |psi|^2
    bool finite = true;        // false marks a blown-up/invalid sample
};

// Discrete energy functional
//   E = integral( |grad psi|^2 / 2 + V |psi|^2 + (2 kappa / (p+1)) |psi|^{p+1} )
// with the gradient term evaluated spectrally (kinetic_energy_integral) and
// the rest by nodal quadrature with the same dx*dy weights as the mass.
// Conserved by the exact flow; nearly conserved by Strang stepping.
double energy(const Field2D& f, const std::vector<double>& potential, const NonlinearitySpec& nl,
              const SpectralPlan& plan);

// max over nodes of |psi|^2 (the figures' ordinate). NaN samples propagate
// so a non-finite field reports a non-finite density.
double max_density(const Field2D& f);

// l2_norm(f - ref); both fields must share a grid.
double l2_error(const Field2D& f, const Field2D& ref);

// Fills one record at time t.
DiagnosticsRecord probe(const Field2D& f, double t, const std::vector<double>& potential,
                        const NonlinearitySpec& nl, const SpectralPlan& plan);

// Detection rule: a record flags blow-up iff it is non-finite or its
// max_density exceeds threshold_factor times the initial max density.
// The default factor 100 sits well above defocusing transients and well
// below pre-overflow focusing growth.
bool blowup_check(const DiagnosticsRecord& record, double initial_max_density,
                  double threshold_factor = 100.0);

}  // namespace gpe
