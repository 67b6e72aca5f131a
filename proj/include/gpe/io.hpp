#pragma once

// Durable interfaces: the run configuration format, the binary field
// snapshot format, and the diagnostics time-series CSV.
//
// Config format: flat sectioned key/value text ("[section]" headers,
// "key = value" lines, '#' comments). Parsing is strict — unknown sections
// or keys are errors, so typos cannot silently change a run. The full
// schema with defaults is documented in the README and reproduced by
// serialize_config.
//
// Snapshot format (bit-exact): magic "GPE2"; format version as 32-bit
// little-endian unsigned; nx, ny as 64-bit little-endian unsigned; a, b, c, d
// as 64-bit little-endian IEEE-754; then nx*ny complex samples as interleaved
// (real, imaginary) 64-bit little-endian IEEE-754, row-major, x fastest.

#include <stdexcept>
#include <string>
#include <vector>

#include "gpe/diagnostics.hpp"
#include "gpe/grid.hpp"
#include "gpe/model.hpp"
#include "gpe/stepper.hpp"

namespace gpe {

// Configuration or override problem; the message names the offending key
// and the violated constraint.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File-level problem: unreadable/unwritable path, bad magic, truncation.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputSpec {
    std::string directory = ".";
    std::string prefix = "run";
    bool write_timeseries = true;
    bool write_final_snapshot = true;
    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

// Everything a single run needs; defaults describe a free defocusing cubic
// Gaussian on [-8,8]^2 (V = 0, kappa = 1, p = 3, sigma = 1).
struct RunConfig {
    GridSpec grid{};
    ModelSpec model{};
    EvolutionSpec evolution{};
    double threshold_factor = 100.0;  // blow-up detector factor
    OutputSpec output{};
    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Parses (and fully validates) a config document; `overrides` entries take
// the form "section.key=value" and obey the same rules as file keys.
RunConfig parse_config(const std::string& text);
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides);
RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides = {});

// Canonical serialization: every key explicit, fixed order, round-trip float
// formatting. parse(serialize(parse(text))) == parse(text).
std::string serialize_config(const RunConfig& config);

// Bit-exact field persistence (see format above).
void write_snapshot(const Field2D& f, const std::string& path);
Field2D read_snapshot(const std::string& path);

// CSV with header t,mass,energy,max_density,finite; floats carry 17
// significant digits so parsing the file back reproduces every bit.
void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path);

}  // namespace gpe
