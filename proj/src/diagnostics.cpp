#include "gpe/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpe {

double energy(const Field2D& f, const std::vector<double>& potential, const NonlinearitySpec& nl,
              const SpectralPlan& plan) {
    if (potential.size() != f.values.size())
        throw std::invalid_argument("energy: potential size mismatch");
    validate_nonlinearity(nl);

    const double kinetic = plan.kinetic_energy_integral(f);

    double pot_sum = 0.0;
    double nl_sum = 0.0;
    const double half_pp1 = 0.5 * (nl.p + 1.0);  // |psi|^{p+1} = (|psi|^2)^{(p+1)/2}
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double amp2 = std::norm(f.values[i]);
        pot_sum += potential[i] * amp2;
        if (nl.kappa != 0.0) {
            if (nl.p == 3.0) {
                nl_sum += amp2 * amp2;
            } else if (amp2 > 0.0) {
                nl_sum += std::pow(amp2, half_pp1);
            }
        }
    }
    const double w = f.grid.dx() * f.grid.dy();
    return kinetic + pot_sum * w + (2.0 * nl.kappa / (nl.p + 1.0)) * nl_sum * w;
}

double max_density(const Field2D& f) {
    double best = 0.0;
    for (const auto& v : f.values) {
        const double amp2 = std::norm(v);
        if (std::isnan(amp2)) return amp2;  // poison: report the invalid sample
        if (amp2 > best) best = amp2;       // also catches +inf
    }
    return best;
}

double l2_error(const Field2D& f, const Field2D& ref) {
    if (!(f.grid == ref.grid)) throw std::invalid_argument("l2_error: grids differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) sum += std::norm(f.values[i] - ref.values[i]);
    return std::sqrt(sum * f.grid.dx() * f.grid.dy());
}

DiagnosticsRecord probe(const Field2D& f, double t, const std::vector<double>& potential,
                        const NonlinearitySpec& nl, const SpectralPlan& plan) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.max_density = max_density(f);
    rec.finite = std::isfinite(rec.max_density);
    if (rec.finite) {
        rec.mass = l2_norm(f);
        rec.energy = energy(f, potential, nl, plan);
        rec.finite = std::isfinite(rec.mass) && std::isfinite(rec.energy);
    } else {
        rec.mass = std::numeric_limits<double>::quiet_NaN();
        rec.energy = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

bool blowup_check(const DiagnosticsRecord& record, double initial_max_density,
                  double threshold_factor) {
    if (!(initial_max_density > 0.0))
        throw std::invalid_argument("blowup_check: initial max density must be positive");
    if (!record.finite) return true;
    return record.max_density > threshold_factor * initial_max_density;
}

}  // namespace gpe
