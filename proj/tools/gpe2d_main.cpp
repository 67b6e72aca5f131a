// gpe2d: command-line front end for the split-step solver.
//
// Subcommands:
//   run             evolve a config, writing a diagnostics CSV and snapshots
//   converge-space  self-convergence study over grid resolution
//   converge-time   self-convergence study over step size
//   describe        print the fully resolved config plus derived quantities
//
// Exit codes (stable contract): 0 completed, 2 configuration error,
// 3 blow-up detected (or a study left incomplete by one), 4 I/O error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "gpe/diagnostics.hpp"
#include "gpe/experiments.hpp"
#include "gpe/io.hpp"
#include "gpe/stepper.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitIo = 4;

std::string fmt(double x, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, x);
    return buf;
}

std::string potential_label(const gpe::RunConfig& cfg) {
    if (const auto* q = std::get_if<gpe::QuadraticPotential>(&cfg.model.potential)) {
        return "V = (" + fmt(q->cx) + " x^2 + " + fmt(q->cy) + " y^2) / (2 * " + fmt(q->eps) + ")";
    }
    if (std::holds_alternative<gpe::TabulatedPotential>(cfg.model.potential)) return "V tabulated";
    return "V = 0";
}

std::filesystem::path ensure_output_dir(const gpe::RunConfig& cfg) {
    std::filesystem::path dir(cfg.output.directory);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw gpe::IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

int cmd_run(const gpe::RunConfig& cfg) {
    const auto dir = ensure_output_dir(cfg);
    const int steps = gpe::validated_step_count(cfg.evolution);

    gpe::Field2D f0 = gpe::init_field(cfg.model.initial, cfg.grid);

    // Snapshot bookkeeping: requested times, clamped into [0, T], are written
    // when the observer sees the step they snap to.
    struct Pending {
        double requested;
        double clamped;
        bool written = false;
    };
    std::vector<Pending> pending;
    for (double ts : cfg.evolution.snapshot_times) {
        double lo = std::min(0.0, cfg.evolution.T), hi = std::max(0.0, cfg.evolution.T);
        pending.push_back({ts, std::min(std::max(ts, lo), hi)});
    }
    const double half_step = std::abs(cfg.evolution.dt) / 2 * (1 + 1e-9);
    std::vector<std::string> written_files;

    gpe::Observer observer = [&](int /*step*/, double t, const gpe::Field2D& f) {
        for (auto& p : pending) {
            if (!p.written && std::abs(t - p.clamped) <= half_step) {
                auto path = dir / (cfg.output.prefix + "_t" + fmt(p.requested, "%.6f") + ".gpe2");
                gpe::write_snapshot(f, path.string());
                written_files.push_back(path.string());
                p.written = true;
            }
        }
    };

    gpe::EvolveResult result =
        gpe::evolve(f0, cfg.model, cfg.evolution, observer, cfg.threshold_factor);

    if (cfg.output.write_timeseries) {
        auto path = dir / (cfg.output.prefix + "_timeseries.csv");
        gpe::write_timeseries(result.series, path.string());
        written_files.push_back(path.string());
    }
    if (cfg.output.write_final_snapshot) {
        auto path = dir / (cfg.output.prefix + "_final.gpe2");
        gpe::write_snapshot(result.final, path.string());
        written_files.push_back(path.string());
    }

    // Last finite record for the summary (the very last one may be the
    // non-finite sample that triggered detection).
    const gpe::DiagnosticsRecord* last = &result.series.front();
    for (auto it = result.series.rbegin(); it != result.series.rend(); ++it) {
        if (it->finite) {
            last = &*it;
            break;
        }
    }
    const gpe::DiagnosticsRecord& first = result.series.front();

    std::cout << "grid: " << cfg.grid.nx << " x " << cfg.grid.ny << " on [" << fmt(cfg.grid.a)
              << ", " << fmt(cfg.grid.b) << "] x [" << fmt(cfg.grid.c) << ", " << fmt(cfg.grid.d)
              << "]\n";
    std::cout << "model: " << potential_label(cfg) << ", kappa = " << fmt(cfg.model.nonlinearity.kappa)
              << ", p = " << fmt(cfg.model.nonlinearity.p) << "\n";
    std::cout << "scheme: " << (cfg.evolution.scheme == gpe::Scheme::Strang ? "strang" : "lie")
              << ", dt = " << fmt(cfg.evolution.dt) << ", T = " << fmt(cfg.evolution.T)
              << ", steps = " << steps << "\n";
    std::cout << "status: "
              << (result.status == gpe::RunStatus::Completed ? "completed" : "blown_up") << "\n";
    if (result.status == gpe::RunStatus::BlownUp)
        std::cout << "blowup_time: " << fmt(result.blowup_time) << "\n";
    std::cout << "final_time: " << fmt(result.final_time) << "\n";
    std::cout << "mass: initial " << fmt(first.mass, "%.12g") << ", final "
              << fmt(last->mass, "%.12g") << ", drift " << fmt(std::abs(last->mass - first.mass), "%.3e")
              << "\n";
    std::cout << "energy: initial " << fmt(first.energy, "%.12g") << ", final "
              << fmt(last->energy, "%.12g") << ", drift "
              << fmt(std::abs(last->energy - first.energy), "%.3e") << "\n";
    std::cout << "max_density: initial " << fmt(first.max_density, "%.12g") << ", last "
              << fmt(last->max_density, "%.12g") << "\n";
    for (const auto& p : written_files) std::cout << "wrote: " << p << "\n";

    return result.status == gpe::RunStatus::Completed ? kExitOk : kExitBlowup;
}

gpe::ScenarioSpec scenario_from(const gpe::RunConfig& cfg) {
    gpe::ScenarioSpec scn;
    scn.grid = cfg.grid;
    scn.model = cfg.model;
    scn.T = cfg.evolution.T;
    scn.scheme = cfg.evolution.scheme;
    scn.label = potential_label(cfg) + ", kappa = " + fmt(cfg.model.nonlinearity.kappa);
    return scn;
}

int cmd_converge_space(const gpe::RunConfig& cfg, std::vector<int> resolutions) {
    if (resolutions.empty()) resolutions = {64, 128, 256};
    const auto dir = ensure_output_dir(cfg);
    gpe::ConvergenceTable table;
    try {
        table = gpe::run_spatial_study(scenario_from(cfg), resolutions, cfg.evolution.dt);
    } catch (const std::invalid_argument& e) {
        throw gpe::ConfigError(e.what());
    }
    std::cout << gpe::format_table(table);
    auto path = dir / (cfg.output.prefix + "_convergence_space.csv");
    std::ofstream out(path);
    if (!out) throw gpe::IoError("cannot open '" + path.string() + "' for writing");
    out << gpe::table_csv(table);
    std::cout << "wrote: " << path.string() << "\n";
    return table.complete ? kExitOk : kExitBlowup;
}

int cmd_converge_time(const gpe::RunConfig& cfg, std::vector<double> dts) {
    if (dts.empty()) dts = {0.01, 0.005, 0.0025, 0.00125, 0.000625};
    if (cfg.grid.nx != cfg.grid.ny)
        throw gpe::ConfigError("converge-time requires a square grid (grid.nx == grid.ny)");
    const auto dir = ensure_output_dir(cfg);
    gpe::ConvergenceTable table;
    try {
        table = gpe::run_temporal_study(scenario_from(cfg), dts, cfg.grid.nx);
    } catch (const std::invalid_argument& e) {
        throw gpe::ConfigError(e.what());
    }
    std::cout << gpe::format_table(table);
    auto path = dir / (cfg.output.prefix + "_convergence_time.csv");
    std::ofstream out(path);
    if (!out) throw gpe::IoError("cannot open '" + path.string() + "' for writing");
    out << gpe::table_csv(table);
    std::cout << "wrote: " << path.string() << "\n";
    return table.complete ? kExitOk : kExitBlowup;
}

int cmd_describe(const gpe::RunConfig& cfg) {
    const int steps = gpe::validated_step_count(cfg.evolution);
    std::cout << gpe::serialize_config(cfg);
    gpe::Field2D f0 = gpe::init_field(cfg.model.initial, cfg.grid);
    const double bytes =
        3.0 * static_cast<double>(cfg.grid.num_nodes()) * sizeof(std::complex<double>);
    std::cout << "\n# derived\n";
    std::cout << "# h = (" << fmt(cfg.grid.dx(), "%.10g") << ", " << fmt(cfg.grid.dy(), "%.10g")
              << ")\n";
    std::cout << "# steps = " << steps << "\n";
    std::cout << "# nodes = " << cfg.grid.num_nodes() << "\n";
    std::cout << "# field memory (3 complex buffers) = " << fmt(bytes / (1024.0 * 1024.0), "%.1f")
              << " MiB\n";
    std::cout << "# initial mass = " << fmt(gpe::l2_norm(f0), "%.12g") << "\n";
    std::cout << "# initial max density = " << fmt(gpe::max_density(f0), "%.12g") << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gpe2d: split-step Fourier solver for the 2D Gross-Pitaevskii equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::vector<int> resolutions;
    std::vector<double> dts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "path to a run config file")->required();
        sub->add_option("--set", overrides,
                        "override a config value as section.key=value (repeatable)");
    };

    CLI::App* run = app.add_subcommand("run", "evolve the configured model to T");
    add_common(run);

    CLI::App* cspace = app.add_subcommand("converge-space", "grid-resolution convergence study");
    add_common(cspace);
    cspace
        ->add_option("--resolutions", resolutions,
                     "doubling list of nx = ny values (default 64,128,256)")
        ->delimiter(',');

    CLI::App* ctime = app.add_subcommand("converge-time", "step-size convergence study");
    add_common(ctime);
    ctime
        ->add_option("--dts", dts,
                     "halving list of step sizes (default 0.01,0.005,0.0025,0.00125,0.000625)")
        ->delimiter(',');

    CLI::App* describe = app.add_subcommand("describe", "print the resolved config and derived sizes");
    add_common(describe);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        gpe::RunConfig cfg = gpe::parse_config_file(config_path, overrides);
        if (run->parsed()) return cmd_run(cfg);
        if (cspace->parsed()) return cmd_converge_space(cfg, resolutions);
        if (ctime->parsed()) return cmd_converge_time(cfg, dts);
        if (describe->parsed()) return cmd_describe(cfg);
        std::cerr << "error: no subcommand\n";
        return kExitConfig;
    } catch (const gpe::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const gpe::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
