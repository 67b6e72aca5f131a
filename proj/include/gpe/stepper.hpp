#pragma once

// Time integration by operator splitting.
//
// The equation splits into two exactly solvable subflows:
//   A: i psi_t = -1/2 Lap psi              (kinetic_step, exact in Fourier space)
//   B: i psi_t = (V + kappa |psi|^{p-1}) psi (potential_nonlinear_step, exact pointwise)
// Lie composes B(dt) then A(dt) (first order); Strang composes
// B(dt/2), A(dt), B(dt/2) (second order, time-symmetric). Both substeps are
// unitary, so discrete mass is preserved to rounding regardless of dt.

#include <functional>
#include <vector>

#include "gpe/diagnostics.hpp"
#include "gpe/grid.hpp"
#include "gpe/model.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

enum class Scheme { Lie, Strang };

struct EvolutionSpec {
    double T = 1.0;
    double dt = 1e-3;
    Scheme scheme = Scheme::Strang;
    int sample_every = 1;                 // diagnostics cadence, in steps
    std::vector<double> snapshot_times{};  // each snapped to the nearest step
    friend bool operator==(const EvolutionSpec&, const EvolutionSpec&) = default;
};

// Number of steps implied by (T, dt); throws std::invalid_argument unless
// T is a whole multiple of dt (relative tolerance 1e-9) and the two share a
// sign (both negative runs the flow backward).
int validated_step_count(const EvolutionSpec& evolution);

enum class RunStatus { Completed, BlownUp };

struct EvolveResult {
    Field2D final;                          // last finite state
    double final_time = 0.0;                // time of `final`
    std::vector<DiagnosticsRecord> series;  // covers [0, stop time]
    RunStatus status = RunStatus::Completed;
    double blowup_time = 0.0;               // meaningful when status == BlownUp
};

// Called at the diagnostics cadence and at snapshot times with
// (step index, time, current field).
using Observer = std::function<void(int step, double t, const Field2D& f)>;

// One Strang step: B(dt/2), A(dt), B(dt/2). Half-steps at step boundaries are
// deliberately not fused so diagnostics sampled between steps see the true
// Strang state.
Field2D strang_step(const Field2D& f, const std::vector<double>& potential,
                    const NonlinearitySpec& nl, const SpectralPlan& plan, double dt);

// One Lie step: B(dt) then A(dt). First-order control scheme.
Field2D lie_step(const Field2D& f, const std::vector<double>& potential,
                 const NonlinearitySpec& nl, const SpectralPlan& plan, double dt);

// Marches f0 to T (or to detection). Diagnostics are recorded at t = 0, at
// every sample_every-th step, and at the final step. The blow-up density
// threshold is checked after every step (the peak density is tracked per
// step anyway), so detection does not depend on the sampling cadence; any
// non-finite state aborts immediately. Blow-up is a result (status BlownUp
// with the last finite field), not an error. Backward evolution (negative dt
// with matching negative T) applies the exact adjoint of each substep.
EvolveResult evolve(const Field2D& f0, const ModelSpec& model, const EvolutionSpec& evolution,
                    const Observer& observer = {}, double blowup_threshold_factor = 100.0);

}  // namespace gpe
