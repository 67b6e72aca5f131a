#pragma once

// Fourier-side machinery: DFT plans, the exact kinetic subflow, and the
// Parseval kinetic-energy quadrature.
//
// Conventions (matching the unnormalized DFT): forward() applies
//   F[k] = sum_x f(x) e^{-i k.x_index...}
// with no scaling; inverse() divides by nx*ny so inverse(forward(f)) == f up
// to rounding. The kinetic subflow i psi_t = -1/2 Lap psi is solved exactly
// in Fourier space: each mode is rotated by exp(-i (kx^2+ky^2) dt / 2).

#include <complex>
#include <vector>

#include "gpe/grid.hpp"

namespace gpe {

// One plan per grid. Construction is cheap and deterministic (no runtime
// tuning), so repeated runs of the same binary produce bit-identical output.
// A plan is not safe for concurrent use (it owns scratch storage); parallel
// evolutions should each construct their own.
class SpectralPlan {
   public:
    explicit SpectralPlan(const GridSpec& grid);
    ~SpectralPlan();

    SpectralPlan(SpectralPlan&&) noexcept;
    SpectralPlan& operator=(SpectralPlan&&) noexcept;
    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;

    const GridSpec& grid() const { return grid_; }

    // Unnormalized forward DFT of f (grid must match the plan's).
    Field2D forward(const Field2D& f) const;

    // Inverse DFT including the 1/(nx*ny) normalization.
    Field2D inverse(const Field2D& f) const;

    // Exact kinetic flow over time dt: psi_hat *= exp(-i (kx^2+ky^2) dt / 2).
    Field2D kinetic_step(const Field2D& f, double dt) const;

    // In-place variant used by the time stepper's inner loop.
    void kinetic_step_inplace(Field2D& f, double dt) const;

    // Kinetic part of the energy functional, evaluated by Parseval:
    //   (1/2) sum_k (kx^2+ky^2) |psi_hat|^2 * dx*dy / (nx*ny)
    // which equals the integral of |grad psi|^2 / 2 at spectral accuracy.
    double kinetic_energy_integral(const Field2D& f) const;

   private:
    void check_grid(const Field2D& f) const;
    const std::vector<std::complex<double>>& kinetic_phase(double dt) const;

    GridSpec grid_;
    WaveNumbers wn_;
    void* plan_fwd_ = nullptr;  // fftw_plan, kept opaque to spare fftw3.h here
    void* plan_bwd_ = nullptr;
    mutable std::vector<std::complex<double>> scratch_;
    // Phase table for the most recent dt: evolve() calls with a fixed step
    // size, so caching turns per-step trig into a table lookup.
    mutable double phase_dt_ = 0.0;
    mutable bool phase_valid_ = false;
    mutable std::vector<std::complex<double>> phase_;
};

}  // namespace gpe
