#include "gpe/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace gpe {

int validated_step_count(const EvolutionSpec& evolution) {
    if (evolution.dt == 0.0 || !std::isfinite(evolution.dt))
        throw std::invalid_argument("evolution: dt must be finite and nonzero");
    if (evolution.T == 0.0 || !std::isfinite(evolution.T))
        throw std::invalid_argument("evolution: T must be finite and nonzero");
    const double ratio = evolution.T / evolution.dt;
    if (!(ratio > 0.0))
        throw std::invalid_argument("evolution: T and dt must have the same sign");
    const long long steps = std::llround(ratio);
    if (steps < 1 || std::abs(steps * evolution.dt - evolution.T) >
                         1e-9 * std::max(std::abs(evolution.T), 1.0))
        throw std::invalid_argument("evolution: T must be a whole multiple of dt");
    if (evolution.sample_every < 1)
        throw std::invalid_argument("evolution: sample_every must be >= 1");
    return static_cast<int>(steps);
}

Field2D strang_step(const Field2D& f, const std::vector<double>& potential,
                    const NonlinearitySpec& nl, const SpectralPlan& plan, double dt) {
    Field2D out = f;
    potential_nonlinear_step_inplace(out, potential, nl, 0.5 * dt);
    plan.kinetic_step_inplace(out, dt);
    potential_nonlinear_step_inplace(out, potential, nl, 0.5 * dt);
    return out;
}

Field2D lie_step(const Field2D& f, const std::vector<double>& potential,
                 const NonlinearitySpec& nl, const SpectralPlan& plan, double dt) {
    Field2D out = f;
    potential_nonlinear_step_inplace(out, potential, nl, dt);
    plan.kinetic_step_inplace(out, dt);
    return out;
}

EvolveResult evolve(const Field2D& f0, const ModelSpec& model, const EvolutionSpec& evolution,
                    const Observer& observer, double blowup_threshold_factor) {
    const int steps = validated_step_count(evolution);
    const SpectralPlan plan(f0.grid);
    const std::vector<double> potential = eval_potential(model.potential, f0.grid);
    const NonlinearitySpec& nl = model.nonlinearity;
    const double dt = evolution.dt;

    // Snapshot requests snap to the nearest step index.
    std::set<int> snapshot_steps;
    for (double ts : evolution.snapshot_times) {
        const long long k = std::llround(ts / dt);
        snapshot_steps.insert(static_cast<int>(std::clamp(k, 0LL, static_cast<long long>(steps))));
    }

    EvolveResult result;
    result.series.reserve(static_cast<std::size_t>(steps / evolution.sample_every) + 2);

    Field2D work = f0;
    result.series.push_back(probe(work, 0.0, potential, nl, plan));
    const double md0 = result.series.front().max_density;
    if (observer) observer(0, 0.0, work);

    // Last finite state, for reporting if a later step turns non-finite.
    Field2D last_finite = work;
    double last_finite_time = 0.0;

    for (int k = 1; k <= steps; ++k) {
        if (evolution.scheme == Scheme::Strang) {
            potential_nonlinear_step_inplace(work, potential, nl, 0.5 * dt);
            plan.kinetic_step_inplace(work, dt);
            potential_nonlinear_step_inplace(work, potential, nl, 0.5 * dt);
        } else {
            potential_nonlinear_step_inplace(work, potential, nl, dt);
            plan.kinetic_step_inplace(work, dt);
        }
        const double t = k * dt;
        const bool sampled = (k % evolution.sample_every == 0) || k == steps;
        const double md = max_density(work);

        if (!std::isfinite(md)) {
            // Immediate abort on a non-finite state, sampled or not: record
            // the event so the series covers the stop time.
            result.series.push_back(probe(work, t, potential, nl, plan));
            if (observer) observer(k, t, work);
            result.status = RunStatus::BlownUp;
            result.blowup_time = t;
            result.final = std::move(last_finite);
            result.final_time = last_finite_time;
            return result;
        }
        last_finite = work;
        last_finite_time = t;

        // The density threshold is checked after *every* step, not just the
        // sampled ones: collapse events can be one-step spikes that a sparse
        // cadence would miss entirely. max_density is already computed per
        // step, so the check costs nothing extra.
        DiagnosticsRecord quick;
        quick.t = t;
        quick.max_density = md;
        quick.finite = true;
        if (md0 > 0.0 && blowup_check(quick, md0, blowup_threshold_factor)) {
            result.series.push_back(probe(work, t, potential, nl, plan));
            if (observer) observer(k, t, work);
            result.status = RunStatus::BlownUp;
            result.blowup_time = t;
            result.final = std::move(work);
            result.final_time = t;
            return result;
        }

        if (sampled || snapshot_steps.count(k)) {
            if (sampled) result.series.push_back(probe(work, t, potential, nl, plan));
            if (observer) observer(k, t, work);
        }
    }

    result.status = RunStatus::Completed;
    result.final = std::move(work);
    result.final_time = steps * dt;
    return result;
}

}  // namespace gpe
