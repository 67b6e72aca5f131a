#include "gpe/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace gpe {

namespace {

// FFTW's planner mutates global state; serialize plan creation/destruction so
// independent evolutions can run on separate threads.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

SpectralPlan::SpectralPlan(const GridSpec& grid)
    : grid_(grid), wn_(wavenumbers(grid)), scratch_(grid.num_nodes()) {
    // Row-major x-fastest storage means x is the contiguous (last) FFTW
    // dimension, hence the (ny, nx) argument order. FFTW_ESTIMATE picks the
    // plan deterministically; FFTW_UNALIGNED lets the plan execute on any
    // caller buffer via the new-array interface.
    std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plan_fwd_ = fftw_plan_dft_2d(grid.ny, grid.nx, as_fftw(scratch_.data()),
                                 as_fftw(scratch_.data()), FFTW_FORWARD, flags);
    plan_bwd_ = fftw_plan_dft_2d(grid.ny, grid.nx, as_fftw(scratch_.data()),
                                 as_fftw(scratch_.data()), FFTW_BACKWARD, flags);
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("spectral: FFT plan creation failed");
}

SpectralPlan::~SpectralPlan() {
    if (plan_fwd_ || plan_bwd_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
        if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    }
}

SpectralPlan::SpectralPlan(SpectralPlan&& other) noexcept
    : grid_(other.grid_),
      wn_(std::move(other.wn_)),
      plan_fwd_(other.plan_fwd_),
      plan_bwd_(other.plan_bwd_),
      scratch_(std::move(other.scratch_)),
      phase_dt_(other.phase_dt_),
      phase_valid_(other.phase_valid_),
      phase_(std::move(other.phase_)) {
    other.plan_fwd_ = nullptr;
    other.plan_bwd_ = nullptr;
}

SpectralPlan& SpectralPlan::operator=(SpectralPlan&& other) noexcept {
    if (this != &other) {
        this->~SpectralPlan();
        new (this) SpectralPlan(std::move(other));
    }
    return *this;
}

void SpectralPlan::check_grid(const Field2D& f) const {
    if (!(f.grid == grid_)) throw std::invalid_argument("spectral: field grid does not match plan");
    if (f.values.size() != grid_.num_nodes())
        throw std::invalid_argument("spectral: field storage size mismatch");
}

Field2D SpectralPlan::forward(const Field2D& f) const {
    check_grid(f);
    Field2D out = make_field(grid_);
    // const_cast is safe: an out-of-place FFTW execute does not write input.
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     as_fftw(const_cast<std::complex<double>*>(f.values.data())),
                     as_fftw(out.values.data()));
    return out;
}

Field2D SpectralPlan::inverse(const Field2D& f) const {
    check_grid(f);
    Field2D out = make_field(grid_);
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                     as_fftw(const_cast<std::complex<double>*>(f.values.data())),
                     as_fftw(out.values.data()));
    const double scale = 1.0 / static_cast<double>(grid_.num_nodes());
    for (auto& v : out.values) v *= scale;
    return out;
}

const std::vector<std::complex<double>>& SpectralPlan::kinetic_phase(double dt) const {
    if (!phase_valid_ || dt != phase_dt_) {
        phase_.resize(grid_.num_nodes());
        std::size_t idx = 0;
        for (int iy = 0; iy < grid_.ny; ++iy) {
            const double ky2 = wn_.ky[iy] * wn_.ky[iy];
            for (int ix = 0; ix < grid_.nx; ++ix, ++idx) {
                const double k2 = wn_.kx[ix] * wn_.kx[ix] + ky2;
                phase_[idx] = std::polar(1.0, -0.5 * k2 * dt);
            }
        }
        phase_dt_ = dt;
        phase_valid_ = true;
    }
    return phase_;
}

void SpectralPlan::kinetic_step_inplace(Field2D& f, double dt) const {
    check_grid(f);
    const auto& phase = kinetic_phase(dt);
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), as_fftw(f.values.data()),
                     as_fftw(scratch_.data()));
    const double scale = 1.0 / static_cast<double>(grid_.num_nodes());
    for (std::size_t i = 0; i < scratch_.size(); ++i) scratch_[i] *= phase[i] * scale;
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), as_fftw(scratch_.data()),
                     as_fftw(f.values.data()));
}

Field2D SpectralPlan::kinetic_step(const Field2D& f, double dt) const {
    Field2D out = f;
    kinetic_step_inplace(out, dt);
    return out;
}

double SpectralPlan::kinetic_energy_integral(const Field2D& f) const {
    check_grid(f);
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     as_fftw(const_cast<std::complex<double>*>(f.values.data())),
                     as_fftw(scratch_.data()));
    double sum = 0.0;
    std::size_t idx = 0;
    for (int iy = 0; iy < grid_.ny; ++iy) {
        const double ky2 = wn_.ky[iy] * wn_.ky[iy];
        for (int ix = 0; ix < grid_.nx; ++ix, ++idx) {
            const double k2 = wn_.kx[ix] * wn_.kx[ix] + ky2;
            sum += 0.5 * k2 * std::norm(scratch_[idx]);
        }
    }
    return sum * grid_.dx() * grid_.dy() / static_cast<double>(grid_.num_nodes());
}

}  // namespace gpe
