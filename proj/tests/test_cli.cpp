// End-to-end checks of the gpe2d binary: exit codes, emitted files, and
// run-to-run determinism. The binary path is injected by the build as
// GPE2D_BIN.
//
// Exit code contract: 0 completed, 2 configuration error, 3 blow-up
// detected, 4 I/O error.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gpe/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CmdResult run_cli(const std::string& args) {
    CmdResult r;
    const std::string cmd = std::string(GPE2D_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// Workspace with a small, fast config (10 steps on a 32x32 grid).
struct CliLab {
    fs::path dir;
    fs::path cfg;

    CliLab() {
        dir = fs::temp_directory_path() / "gpe2d_cli_lab";
        fs::remove_all(dir);
        fs::create_directories(dir);
        cfg = dir / "quick.cfg";
        std::ofstream out(cfg);
        out << "[grid]\nnx = 32\nny = 32\n"
            << "[potential]\ntype = quadratic\ncx = 1\ncy = 1\neps = 1\n"
            << "[evolution]\nT = 0.01\ndt = 0.001\nsnapshot_times = 0.005\n"
            << "[output]\ndirectory = " << (dir / "out").string() << "\nprefix = quick\n";
    }
    ~CliLab() { fs::remove_all(dir); }
};

std::string slurp_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("run completes, writes its artifacts, and is bit-for-bit deterministic") {
    CliLab lab;
    const std::string args = "run --config " + lab.cfg.string();

    CmdResult r1 = run_cli(args);
    CHECK(r1.exit_code == 0);
    CHECK(r1.output.find("status: completed") != std::string::npos);
    CHECK(r1.output.find("mass:") != std::string::npos);
    CHECK(r1.output.find("energy:") != std::string::npos);

    const fs::path series = lab.dir / "out" / "quick_timeseries.csv";
    const fs::path snap_mid = lab.dir / "out" / "quick_t0.005000.gpe2";
    const fs::path snap_final = lab.dir / "out" / "quick_final.gpe2";
    REQUIRE(fs::exists(series));
    REQUIRE(fs::exists(snap_mid));
    REQUIRE(fs::exists(snap_final));

    // the final snapshot parses and sits on the configured grid
    gpe::Field2D f = gpe::read_snapshot(snap_final.string());
    CHECK(f.grid.nx == 32);
    CHECK(f.grid.ny == 32);

    const std::string series1 = slurp_bytes(series);
    const std::string snap1 = slurp_bytes(snap_final);
    CmdResult r2 = run_cli(args);
    CHECK(r2.exit_code == 0);
    CHECK(slurp_bytes(series) == series1);
    CHECK(slurp_bytes(snap_final) == snap1);
    CHECK(r2.output == r1.output);
}

TEST_CASE("describe prints the resolved config and derived quantities") {
    CliLab lab;
    CmdResult r = run_cli("describe --config " + lab.cfg.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("[grid]") != std::string::npos);
    CHECK(r.output.find("nx = 32") != std::string::npos);
    CHECK(r.output.find("# steps = 10") != std::string::npos);
    CHECK(r.output.find("# nodes = 1024") != std::string::npos);
    CHECK(r.output.find("initial mass") != std::string::npos);
}

TEST_CASE("configuration problems exit with code 2 and a named key") {
    CliLab lab;
    CmdResult missing = run_cli("run --config /nonexistent/nope.cfg");
    CHECK(missing.exit_code == 2);

    CmdResult badkey = run_cli("run --config " + lab.cfg.string() + " --set grid.nz=4");
    CHECK(badkey.exit_code == 2);
    CHECK(badkey.output.find("grid.nz") != std::string::npos);

    CmdResult oddnx = run_cli("run --config " + lab.cfg.string() + " --set grid.nx=255");
    CHECK(oddnx.exit_code == 2);
    CHECK(oddnx.output.find("nx") != std::string::npos);

    CmdResult nosub = run_cli("");
    CHECK(nosub.exit_code == 2);
}

TEST_CASE("a detected blow-up exits with code 3") {
    CliLab lab;
    // strongly attractive coupling in a stiff trap: collapses near t = 0.46
    CmdResult r = run_cli("run --config " + lab.cfg.string() +
                          " --set grid.nx=128 --set grid.ny=128" +
                          " --set potential.eps=0.3 --set nonlinearity.kappa=-12" +
                          " --set evolution.T=2 --set evolution.dt=0.005" +
                          " --set output.prefix=collapse");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("status: blown_up") != std::string::npos);
    // detection lands at t = 0.46 on this setup; allow a step of slack
    CHECK(r.output.find("blowup_time: 0.4") != std::string::npos);
}

TEST_CASE("convergence subcommands emit tables and CSVs") {
    CliLab lab;
    CmdResult t = run_cli("converge-time --config " + lab.cfg.string() +
                          " --set evolution.T=0.1 --set grid.nx=64 --set grid.ny=64" +
                          " --dts 0.01,0.005");
    CHECK(t.exit_code == 0);
    CHECK(t.output.find("temporal convergence") != std::string::npos);
    CHECK(t.output.find("fitted order") != std::string::npos);
    CHECK(fs::exists(lab.dir / "out" / "quick_convergence_time.csv"));

    CmdResult s = run_cli("converge-space --config " + lab.cfg.string() +
                          " --set evolution.T=0.05 --resolutions 16,32");
    CHECK(s.exit_code == 0);
    CHECK(s.output.find("spatial convergence") != std::string::npos);
    CHECK(fs::exists(lab.dir / "out" / "quick_convergence_space.csv"));
}
