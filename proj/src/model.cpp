#include "gpe/model.hpp"

#include <cmath>
#include <stdexcept>

namespace gpe {

std::vector<double> eval_potential(const PotentialSpec& potential, const GridSpec& grid) {
    std::vector<double> out(grid.num_nodes(), 0.0);
    if (std::holds_alternative<ZeroPotential>(potential)) return out;

    if (const auto* q = std::get_if<QuadraticPotential>(&potential)) {
        if (q->eps == 0.0 || !std::isfinite(q->eps))
            throw std::invalid_argument("potential: eps must be finite and nonzero");
        if (!std::isfinite(q->cx) || !std::isfinite(q->cy))
            throw std::invalid_argument("potential: coefficients must be finite");
        const double inv2eps = 1.0 / (2.0 * q->eps);
        std::size_t idx = 0;
        for (int iy = 0; iy < grid.ny; ++iy) {
            const double y = grid.y(iy);
            const double ty = q->cy * y * y;
            for (int ix = 0; ix < grid.nx; ++ix, ++idx) {
                const double x = grid.x(ix);
                out[idx] = (q->cx * x * x + ty) * inv2eps;
            }
        }
        return out;
    }

    const auto& tab = std::get<TabulatedPotential>(potential);
    if (tab.values.size() != grid.num_nodes())
        throw std::invalid_argument("potential: tabulated size does not match grid");
    return tab.values;
}

Field2D init_field(const InitialDataSpec& initial, const GridSpec& grid) {
    Field2D f = make_field(grid);

    if (const auto* g = std::get_if<GaussianData>(&initial)) {
        if (!(g->sigma > 0.0) || !std::isfinite(g->sigma))
            throw std::invalid_argument("initial: gaussian sigma must be positive and finite");
        const double amp = 1.0 / std::sqrt(g->sigma * M_PI);
        const double inv2sigma = 1.0 / (2.0 * g->sigma);
        std::size_t idx = 0;
        for (int iy = 0; iy < grid.ny; ++iy) {
            const double y = grid.y(iy);
            for (int ix = 0; ix < grid.nx; ++ix, ++idx) {
                const double x = grid.x(ix);
                f.values[idx] = amp * std::exp(-(x * x + y * y) * inv2sigma);
            }
        }
        return f;
    }

    if (std::holds_alternative<HatData>(initial)) {
        std::size_t idx = 0;
        for (int iy = 0; iy < grid.ny; ++iy) {
            const double y = grid.y(iy);
            for (int ix = 0; ix < grid.nx; ++ix, ++idx) {
                const double x = grid.x(ix);
                f.values[idx] = (8.0 - std::abs(x)) * (8.0 - std::abs(y));
            }
        }
        return f;
    }

    const auto& custom = std::get<CustomData>(initial);
    if (custom.values.size() != grid.num_nodes())
        throw std::invalid_argument("initial: custom data size does not match grid");
    f.values = custom.values;
    return f;
}

void validate_nonlinearity(const NonlinearitySpec& nl) {
    if (!std::isfinite(nl.kappa)) throw std::invalid_argument("nonlinearity: kappa must be finite");
    if (!(nl.p >= 1.0) || !std::isfinite(nl.p))
        throw std::invalid_argument("nonlinearity: p must be finite and >= 1");
}

void potential_nonlinear_step_inplace(Field2D& f, const std::vector<double>& potential,
                                      const NonlinearitySpec& nl, double dt) {
    if (potential.size() != f.values.size())
        throw std::invalid_argument("potential_nonlinear_step: potential size mismatch");
    validate_nonlinearity(nl);

    const double kappa = nl.kappa;
    const std::size_t n = f.values.size();

    if (kappa == 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            f.values[i] *= std::polar(1.0, -potential[i] * dt);
        return;
    }
    if (nl.p == 3.0) {  // cubic GPE fast path: |psi|^{p-1} = |psi|^2
        for (std::size_t i = 0; i < n; ++i) {
            const double amp2 = std::norm(f.values[i]);
            f.values[i] *= std::polar(1.0, -(potential[i] + kappa * amp2) * dt);
        }
        return;
    }
    if (nl.p == 5.0) {  // quintic fast path
        for (std::size_t i = 0; i < n; ++i) {
            const double amp2 = std::norm(f.values[i]);
            f.values[i] *= std::polar(1.0, -(potential[i] + kappa * amp2 * amp2) * dt);
        }
        return;
    }
    const double half_pm1 = 0.5 * (nl.p - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double amp2 = std::norm(f.values[i]);
        // |psi|^{p-1} = (|psi|^2)^{(p-1)/2}; at a node with amp2 = 0 the
        // nonlinear term vanishes for p > 1, so guard the 0^0 corner.
        const double nlin = (amp2 > 0.0) ? std::pow(amp2, half_pm1) : 0.0;
        f.values[i] *= std::polar(1.0, -(potential[i] + kappa * nlin) * dt);
    }
}

Field2D potential_nonlinear_step(const Field2D& f, const std::vector<double>& potential,
                                 const NonlinearitySpec& nl, double dt) {
    Field2D out = f;
    potential_nonlinear_step_inplace(out, potential, nl, dt);
    return out;
}

}  // namespace gpe
