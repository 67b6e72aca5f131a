#pragma once

// Convergence-study harness: self-convergence references, nested-grid
// restriction, and least-squares order estimation.
//
// No closed-form solutions exist for the studied scenarios, so "exact" is a
// self-convergence reference: the spatial study compares each grid against a
// run one level finer (restricted onto the coarse nodes), the temporal study
// compares each dt against a run at dt_min/4 on the same grid. Every emitted
// table records which reference was used.

#include <optional>
#include <string>
#include <vector>

#include "gpe/grid.hpp"
#include "gpe/model.hpp"
#include "gpe/stepper.hpp"

namespace gpe {

// A named experiment: domain/grid template, model, horizon, scheme.
struct ScenarioSpec {
    GridSpec grid;   // bounds always used; nx/ny are the study's base resolution
    ModelSpec model;
    double T = 1.0;
    Scheme scheme = Scheme::Strang;
    std::string label;  // e.g. the potential formula, for table headers
};

enum class StudyAxis { Spatial, Temporal };

struct ConvergenceRow {
    double resolution = 0.0;  // h for spatial studies, dt for temporal ones
    double error = 0.0;       // l2_error against the study's reference at t = T
};

struct ConvergenceTable {
    StudyAxis axis = StudyAxis::Temporal;
    std::string label;
    std::vector<ConvergenceRow> rows;          // resolution strictly decreasing
    std::optional<double> fitted_order;        // absent with fewer than 2 rows
    bool complete = true;                      // false if blow-up cut the study short
    std::string reference_note;                // how the reference was built
};

// Subsamples a fine field onto a coarser nested grid (same bounds, point
// counts dividing the fine ones); exact on shared nodes.
Field2D nested_restrict(const Field2D& fine, const GridSpec& coarse);

// Spatial study: dt_ref held fixed, grid resolution doubling through
// `resolutions` (values of nx = ny; h = (b-a)/nx). The reference runs one
// level finer than the finest requested resolution. On blow-up the table is
// returned incomplete with the rows finished so far.
ConvergenceTable run_spatial_study(const ScenarioSpec& scenario,
                                   const std::vector<int>& resolutions, double dt_ref);

// Temporal study: grid fixed at nx = ny = m_fixed, dt strictly halving
// through dt_list; the reference runs at dt_min/4 on the same grid (its own
// error is >= 16x below the finest measured row).
ConvergenceTable run_temporal_study(const ScenarioSpec& scenario,
                                    const std::vector<double>& dt_list, int m_fixed);

// Least-squares slope of log(error) against log(resolution); requires at
// least two rows with positive errors.
double estimate_order(const std::vector<ConvergenceRow>& rows);

// Aligned plain-text rendering (resolution, error, running order) plus the
// reference note; and a two-column CSV (resolution,error).
std::string format_table(const ConvergenceTable& table);
std::string table_csv(const ConvergenceTable& table);

}  // namespace gpe
