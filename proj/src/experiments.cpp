#include "gpe/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "gpe/diagnostics.hpp"

namespace gpe {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%- 14.6e", v);
    return buf;
}

Field2D run_to_T(const ScenarioSpec& scenario, const GridSpec& grid, double dt,
                 RunStatus* status_out) {
    EvolutionSpec evo;
    evo.T = scenario.T;
    evo.dt = dt;
    evo.scheme = scenario.scheme;
    // Studies only need the end state; sample sparsely but keep the blow-up
    // detector engaged so a diverging row aborts the study cleanly.
    evo.sample_every = 100;
    Field2D f0 = init_field(scenario.model.initial, grid);
    EvolveResult r = evolve(f0, scenario.model, evo);
    *status_out = r.status;
    return std::move(r.final);
}

}  // namespace

Field2D nested_restrict(const Field2D& fine, const GridSpec& coarse) {
    const GridSpec& fg = fine.grid;
    if (fg.a != coarse.a || fg.b != coarse.b || fg.c != coarse.c || fg.d != coarse.d)
        throw std::invalid_argument("nested_restrict: bounds differ");
    if (coarse.nx < 2 || coarse.ny < 2 || fg.nx % coarse.nx != 0 || fg.ny % coarse.ny != 0)
        throw std::invalid_argument("nested_restrict: grids are not nested");
    const int sx = fg.nx / coarse.nx;
    const int sy = fg.ny / coarse.ny;
    Field2D out = make_field(coarse);
    for (int iy = 0; iy < coarse.ny; ++iy)
        for (int ix = 0; ix < coarse.nx; ++ix) out.at(ix, iy) = fine.at(ix * sx, iy * sy);
    return out;
}

double estimate_order(const std::vector<ConvergenceRow>& rows) {
    if (rows.size() < 2) throw std::invalid_argument("estimate_order: need at least 2 rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        if (!(r.error > 0.0) || !(r.resolution > 0.0) || !std::isfinite(r.error))
            throw std::domain_error("estimate_order: rows must have positive finite values");
        const double lx = std::log(r.resolution);
        const double ly = std::log(r.error);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(rows.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::domain_error("estimate_order: degenerate resolutions");
    return (n * sxy - sx * sy) / denom;
}

ConvergenceTable run_spatial_study(const ScenarioSpec& scenario,
                                   const std::vector<int>& resolutions, double dt_ref) {
    if (resolutions.empty()) throw std::invalid_argument("spatial study: empty resolution list");
    for (std::size_t i = 1; i < resolutions.size(); ++i)
        if (resolutions[i] != 2 * resolutions[i - 1])
            throw std::invalid_argument("spatial study: resolutions must double at each level");

    ConvergenceTable table;
    table.axis = StudyAxis::Spatial;
    table.label = scenario.label;
    const int m_ref = 2 * resolutions.back();
    table.reference_note = "reference: self-convergence run one level finer (nx = " +
                           std::to_string(m_ref) + "), nested-restricted; dt = " + fmt(dt_ref);

    const GridSpec base = scenario.grid;
    RunStatus status = RunStatus::Completed;
    const GridSpec ref_grid = make_grid(base.a, base.b, base.c, base.d, m_ref, m_ref);
    Field2D reference = run_to_T(scenario, ref_grid, dt_ref, &status);
    if (status != RunStatus::Completed) {
        table.complete = false;  // reference itself diverged: no usable rows
        return table;
    }

    for (int m : resolutions) {
        const GridSpec g = make_grid(base.a, base.b, base.c, base.d, m, m);
        Field2D f = run_to_T(scenario, g, dt_ref, &status);
        if (status != RunStatus::Completed) {
            table.complete = false;
            break;
        }
        table.rows.push_back({(base.b - base.a) / m, l2_error(f, nested_restrict(reference, g))});
    }
    if (table.rows.size() >= 2) table.fitted_order = estimate_order(table.rows);
    return table;
}

ConvergenceTable run_temporal_study(const ScenarioSpec& scenario,
                                    const std::vector<double>& dt_list, int m_fixed) {
    if (dt_list.empty()) throw std::invalid_argument("temporal study: empty dt list");
    for (std::size_t i = 1; i < dt_list.size(); ++i)
        if (std::abs(dt_list[i] - 0.5 * dt_list[i - 1]) > 1e-12 * dt_list[i - 1])
            throw std::invalid_argument("temporal study: dt must halve at each level");

    ConvergenceTable table;
    table.axis = StudyAxis::Temporal;
    table.label = scenario.label;
    const double dt_ref = dt_list.back() / 4.0;
    table.reference_note =
        "reference: self-convergence run at dt_min/4 = " + fmt(dt_ref) + " on the same grid";

    const GridSpec base = scenario.grid;
    const GridSpec g = make_grid(base.a, base.b, base.c, base.d, m_fixed, m_fixed);
    RunStatus status = RunStatus::Completed;
    Field2D reference = run_to_T(scenario, g, dt_ref, &status);
    if (status != RunStatus::Completed) {
        table.complete = false;
        return table;
    }

    for (double dt : dt_list) {
        Field2D f = run_to_T(scenario, g, dt, &status);
        if (status != RunStatus::Completed) {
            table.complete = false;
            break;
        }
        table.rows.push_back({dt, l2_error(f, reference)});
    }
    if (table.rows.size() >= 2) table.fitted_order = estimate_order(table.rows);
    return table;
}

std::string format_table(const ConvergenceTable& table) {
    std::ostringstream os;
    const bool spatial = table.axis == StudyAxis::Spatial;
    os << (spatial ? "spatial" : "temporal") << " convergence";
    if (!table.label.empty()) os << "  [" << table.label << "]";
    os << "\n" << (spatial ? "      h       " : "      dt      ") << "   L2 error      ratio\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        os << fmt_short(table.rows[i].resolution) << " " << fmt_short(table.rows[i].error);
        if (i > 0 && table.rows[i].error > 0.0)
            os << " " << fmt_short(table.rows[i - 1].error / table.rows[i].error);
        os << "\n";
    }
    if (table.fitted_order)
        os << "fitted order: " << fmt_short(*table.fitted_order) << "\n";
    else
        os << "fitted order: (not reported; fewer than 2 rows)\n";
    if (!table.complete) os << "study incomplete: a run flagged blow-up\n";
    os << table.reference_note << "\n";
    return os.str();
}

std::string table_csv(const ConvergenceTable& table) {
    std::ostringstream os;
    os << "resolution,error\n";
    for (const auto& r : table.rows) os << fmt(r.resolution) << "," << fmt(r.error) << "\n";
    return os.str();
}

}  // namespace gpe
