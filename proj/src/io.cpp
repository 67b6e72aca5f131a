#include "gpe/io.hpp"

#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>
#include <variant>

namespace gpe {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");
static_assert(sizeof(std::complex<double>) == 2 * sizeof(double),
              "snapshot I/O assumes interleaved re/im layout");

namespace {

// ---------------------------------------------------------------------------
// text helpers
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& qkey, const std::string& raw) {
    const std::string v = trim(raw);
    if (v.empty()) throw ConfigError("key '" + qkey + "': expected a number, got empty value");
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || errno == ERANGE)
        throw ConfigError("key '" + qkey + "': cannot parse '" + v + "' as a number");
    return x;
}

long long parse_int(const std::string& qkey, const std::string& raw) {
    const std::string v = trim(raw);
    if (v.empty()) throw ConfigError("key '" + qkey + "': expected an integer, got empty value");
    errno = 0;
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || errno == ERANGE)
        throw ConfigError("key '" + qkey + "': cannot parse '" + v + "' as an integer");
    return x;
}

bool parse_bool(const std::string& qkey, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("key '" + qkey + "': expected 'true' or 'false', got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& qkey, const std::string& raw) {
    std::vector<double> out;
    const std::string v = trim(raw);
    if (v.empty()) return out;
    for (const auto& tok : split(v, ',')) out.push_back(parse_double(qkey, tok));
    return out;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// key/value store with strict consumption
// ---------------------------------------------------------------------------

// Holds "section.key" -> value in first-seen order. Every key must be
// consumed while building the RunConfig; leftovers are unknown keys.
class KvStore {
  public:
    void insert(const std::string& qkey, const std::string& value, bool allow_overwrite) {
        for (auto& item : items_) {
            if (item.key == qkey) {
                if (!allow_overwrite)
                    throw ConfigError("key '" + qkey + "' appears more than once");
                item.value = value;
                return;
            }
        }
        items_.push_back({qkey, value, false});
    }

    // Returns the value if present and marks the key consumed.
    const std::string* take(const std::string& qkey) {
        for (auto& item : items_) {
            if (item.key == qkey) {
                item.consumed = true;
                return &item.value;
            }
        }
        return nullptr;
    }

    bool has(const std::string& qkey) const {
        for (const auto& item : items_)
            if (item.key == qkey) return true;
        return false;
    }

    void reject_leftovers() const {
        for (const auto& item : items_)
            if (!item.consumed) throw ConfigError("unknown key '" + item.key + "'");
    }

  private:
    struct Item {
        std::string key;
        std::string value;
        bool consumed;
    };
    std::vector<Item> items_;
};

const char* const kSections[] = {"grid",      "potential",   "nonlinearity", "initial",
                                 "evolution", "diagnostics", "output"};

bool known_section(const std::string& name) {
    for (const char* s : kSections)
        if (name == s) return true;
    return false;
}

KvStore tokenize(const std::string& text) {
    KvStore store;
    std::string section;
    std::istringstream in(text);
    std::string rawline;
    int lineno = 0;
    while (std::getline(in, rawline)) {
        ++lineno;
        std::string line = trim(rawline);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header '" +
                                  line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_section(section))
                throw ConfigError("unknown section '[" + section + "]'");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" +
                              line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError("key '" + key + "' appears before any [section] header");
        store.insert(section + "." + key, value, /*allow_overwrite=*/false);
    }
    return store;
}

void apply_overrides(KvStore& store, const std::vector<std::string>& overrides) {
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "': expected section.key=value");
        std::string qkey = trim(ov.substr(0, eq));
        std::string value = trim(ov.substr(eq + 1));
        auto dot = qkey.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == qkey.size() ||
            qkey.find('.', dot + 1) != std::string::npos)
            throw ConfigError("override '" + ov + "': key must have the form section.key");
        if (!known_section(qkey.substr(0, dot)))
            throw ConfigError("unknown section '[" + qkey.substr(0, dot) + "]'");
        store.insert(qkey, value, /*allow_overwrite=*/true);
    }
}

// ---------------------------------------------------------------------------
// RunConfig construction with full validation
// ---------------------------------------------------------------------------

RunConfig build_config(KvStore& store) {
    RunConfig cfg;

    // [grid]
    double a = -8.0, b = 8.0, c = -8.0, d = 8.0;
    long long nx = 256, ny = 256;
    if (const auto* v = store.take("grid.a")) a = parse_double("grid.a", *v);
    if (const auto* v = store.take("grid.b")) b = parse_double("grid.b", *v);
    if (const auto* v = store.take("grid.c")) c = parse_double("grid.c", *v);
    if (const auto* v = store.take("grid.d")) d = parse_double("grid.d", *v);
    if (const auto* v = store.take("grid.nx")) nx = parse_int("grid.nx", *v);
    if (const auto* v = store.take("grid.ny")) ny = parse_int("grid.ny", *v);
    if (nx < 0 || nx > (1 << 26) || ny < 0 || ny > (1 << 26))
        throw ConfigError("grid.nx/grid.ny out of supported range");
    try {
        cfg.grid = make_grid(a, b, c, d, static_cast<int>(nx), static_cast<int>(ny));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }

    // [potential]
    std::string pot_type = "zero";
    if (const auto* v = store.take("potential.type")) pot_type = trim(*v);
    if (pot_type == "zero") {
        for (const char* k : {"potential.cx", "potential.cy", "potential.eps"})
            if (store.has(k))
                throw ConfigError(std::string("key '") + k +
                                  "' requires potential.type = quadratic");
        cfg.model.potential = ZeroPotential{};
    } else if (pot_type == "quadratic") {
        QuadraticPotential q;
        if (const auto* v = store.take("potential.cx")) q.cx = parse_double("potential.cx", *v);
        if (const auto* v = store.take("potential.cy")) q.cy = parse_double("potential.cy", *v);
        if (const auto* v = store.take("potential.eps")) q.eps = parse_double("potential.eps", *v);
        if (!std::isfinite(q.cx) || !std::isfinite(q.cy))
            throw ConfigError("potential.cx/potential.cy must be finite");
        if (!std::isfinite(q.eps) || q.eps == 0.0)
            throw ConfigError("potential.eps must be finite and nonzero");
        cfg.model.potential = q;
    } else {
        throw ConfigError("potential.type: expected 'zero' or 'quadratic', got '" + pot_type + "'");
    }

    // [nonlinearity]
    if (const auto* v = store.take("nonlinearity.kappa"))
        cfg.model.nonlinearity.kappa = parse_double("nonlinearity.kappa", *v);
    if (const auto* v = store.take("nonlinearity.p"))
        cfg.model.nonlinearity.p = parse_double("nonlinearity.p", *v);
    try {
        validate_nonlinearity(cfg.model.nonlinearity);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("nonlinearity: ") + e.what());
    }

    // [initial]
    std::string init_type = "gaussian";
    if (const auto* v = store.take("initial.type")) init_type = trim(*v);
    if (init_type == "gaussian") {
        GaussianData g;
        if (const auto* v = store.take("initial.sigma")) g.sigma = parse_double("initial.sigma", *v);
        if (!std::isfinite(g.sigma) || g.sigma <= 0.0)
            throw ConfigError("initial.sigma must be finite and positive");
        cfg.model.initial = g;
    } else if (init_type == "hat") {
        if (store.has("initial.sigma"))
            throw ConfigError("key 'initial.sigma' requires initial.type = gaussian");
        cfg.model.initial = HatData{};
    } else {
        throw ConfigError("initial.type: expected 'gaussian' or 'hat', got '" + init_type + "'");
    }

    // [evolution]
    if (const auto* v = store.take("evolution.T"))
        cfg.evolution.T = parse_double("evolution.T", *v);
    if (const auto* v = store.take("evolution.dt"))
        cfg.evolution.dt = parse_double("evolution.dt", *v);
    if (const auto* v = store.take("evolution.scheme")) {
        std::string s = trim(*v);
        if (s == "strang")
            cfg.evolution.scheme = Scheme::Strang;
        else if (s == "lie")
            cfg.evolution.scheme = Scheme::Lie;
        else
            throw ConfigError("evolution.scheme: expected 'strang' or 'lie', got '" + s + "'");
    }
    if (const auto* v = store.take("evolution.sample_every")) {
        long long s = parse_int("evolution.sample_every", *v);
        if (s < 1 || s > (1 << 30)) throw ConfigError("evolution.sample_every must be >= 1");
        cfg.evolution.sample_every = static_cast<int>(s);
    }
    if (const auto* v = store.take("evolution.snapshot_times"))
        cfg.evolution.snapshot_times = parse_double_list("evolution.snapshot_times", *v);
    for (double ts : cfg.evolution.snapshot_times)
        if (!std::isfinite(ts)) throw ConfigError("evolution.snapshot_times entries must be finite");
    try {
        validated_step_count(cfg.evolution);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("evolution: ") + e.what());
    }

    // [diagnostics]
    if (const auto* v = store.take("diagnostics.threshold_factor"))
        cfg.threshold_factor = parse_double("diagnostics.threshold_factor", *v);
    if (!std::isfinite(cfg.threshold_factor) || cfg.threshold_factor <= 0.0)
        throw ConfigError("diagnostics.threshold_factor must be finite and positive");

    // [output]
    if (const auto* v = store.take("output.directory")) {
        cfg.output.directory = trim(*v);
        if (cfg.output.directory.empty()) throw ConfigError("output.directory must be nonempty");
    }
    if (const auto* v = store.take("output.prefix")) {
        cfg.output.prefix = trim(*v);
        if (cfg.output.prefix.empty()) throw ConfigError("output.prefix must be nonempty");
    }
    if (const auto* v = store.take("output.write_timeseries"))
        cfg.output.write_timeseries = parse_bool("output.write_timeseries", *v);
    if (const auto* v = store.take("output.write_final_snapshot"))
        cfg.output.write_final_snapshot = parse_bool("output.write_final_snapshot", *v);

    store.reject_leftovers();
    return cfg;
}

// ---------------------------------------------------------------------------
// binary helpers
// ---------------------------------------------------------------------------

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw IoError("snapshot '" + path + "': truncated header");
    return v;
}
std::uint64_t get_u64(std::istream& in, const std::string& path) {
    std::uint64_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw IoError("snapshot '" + path + "': truncated header");
    return v;
}
double get_f64(std::istream& in, const std::string& path) {
    double v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw IoError("snapshot '" + path + "': truncated header");
    return v;
}

constexpr char kMagic[4] = {'G', 'P', 'E', '2'};
constexpr std::uint32_t kSnapshotVersion = 1;

}  // namespace

// ---------------------------------------------------------------------------
// public API
// ---------------------------------------------------------------------------

RunConfig parse_config(const std::string& text) { return parse_config(text, {}); }

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    KvStore store = tokenize(text);
    apply_overrides(store, overrides);
    return build_config(store);
}

RunConfig parse_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

std::string serialize_config(const RunConfig& config) {
    std::string out;
    out += "[grid]\n";
    out += "a = " + fmt(config.grid.a) + "\n";
    out += "b = " + fmt(config.grid.b) + "\n";
    out += "c = " + fmt(config.grid.c) + "\n";
    out += "d = " + fmt(config.grid.d) + "\n";
    out += "nx = " + std::to_string(config.grid.nx) + "\n";
    out += "ny = " + std::to_string(config.grid.ny) + "\n";

    out += "\n[potential]\n";
    if (std::holds_alternative<ZeroPotential>(config.model.potential)) {
        out += "type = zero\n";
    } else if (const auto* q = std::get_if<QuadraticPotential>(&config.model.potential)) {
        out += "type = quadratic\n";
        out += "cx = " + fmt(q->cx) + "\n";
        out += "cy = " + fmt(q->cy) + "\n";
        out += "eps = " + fmt(q->eps) + "\n";
    } else {
        throw ConfigError("potential: tabulated potentials have no config representation");
    }

    out += "\n[nonlinearity]\n";
    out += "kappa = " + fmt(config.model.nonlinearity.kappa) + "\n";
    out += "p = " + fmt(config.model.nonlinearity.p) + "\n";

    out += "\n[initial]\n";
    if (const auto* g = std::get_if<GaussianData>(&config.model.initial)) {
        out += "type = gaussian\n";
        out += "sigma = " + fmt(g->sigma) + "\n";
    } else if (std::holds_alternative<HatData>(config.model.initial)) {
        out += "type = hat\n";
    } else {
        throw ConfigError("initial: custom data has no config representation");
    }

    out += "\n[evolution]\n";
    out += "T = " + fmt(config.evolution.T) + "\n";
    out += "dt = " + fmt(config.evolution.dt) + "\n";
    out += std::string("scheme = ") +
           (config.evolution.scheme == Scheme::Strang ? "strang" : "lie") + "\n";
    out += "sample_every = " + std::to_string(config.evolution.sample_every) + "\n";
    out += "snapshot_times = ";
    for (std::size_t i = 0; i < config.evolution.snapshot_times.size(); ++i) {
        if (i) out += ", ";
        out += fmt(config.evolution.snapshot_times[i]);
    }
    out += "\n";

    out += "\n[diagnostics]\n";
    out += "threshold_factor = " + fmt(config.threshold_factor) + "\n";

    out += "\n[output]\n";
    out += "directory = " + config.output.directory + "\n";
    out += "prefix = " + config.output.prefix + "\n";
    out += std::string("write_timeseries = ") + (config.output.write_timeseries ? "true" : "false") +
           "\n";
    out += std::string("write_final_snapshot = ") +
           (config.output.write_final_snapshot ? "true" : "false") + "\n";
    return out;
}

void write_snapshot(const Field2D& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(kMagic, sizeof kMagic);
    put_u32(out, kSnapshotVersion);
    put_u64(out, static_cast<std::uint64_t>(f.grid.nx));
    put_u64(out, static_cast<std::uint64_t>(f.grid.ny));
    put_f64(out, f.grid.a);
    put_f64(out, f.grid.b);
    put_f64(out, f.grid.c);
    put_f64(out, f.grid.d);
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(std::complex<double>)));
    out.flush();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

Field2D read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    char magic[4] = {};
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw IoError("snapshot '" + path + "': bad magic (not a GPE2 snapshot)");
    const std::uint32_t version = get_u32(in, path);
    if (version != kSnapshotVersion)
        throw IoError("snapshot '" + path + "': unsupported version " + std::to_string(version));
    const std::uint64_t nx = get_u64(in, path);
    const std::uint64_t ny = get_u64(in, path);
    if (nx > (1u << 26) || ny > (1u << 26))
        throw IoError("snapshot '" + path + "': grid size out of supported range");
    const double a = get_f64(in, path);
    const double b = get_f64(in, path);
    const double c = get_f64(in, path);
    const double d = get_f64(in, path);
    Field2D f;
    try {
        f = make_field(make_grid(a, b, c, d, static_cast<int>(nx), static_cast<int>(ny)));
    } catch (const std::invalid_argument& e) {
        throw IoError("snapshot '" + path + "': invalid header: " + e.what());
    }
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(std::complex<double>)));
    if (static_cast<std::size_t>(in.gcount()) != f.values.size() * sizeof(std::complex<double>))
        throw IoError("snapshot '" + path + "': truncated payload");
    in.peek();
    if (!in.eof()) throw IoError("snapshot '" + path + "': trailing bytes after payload");
    return f;
}

void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
    if (records.empty()) throw std::invalid_argument("timeseries: no records to write");
    for (std::size_t i = 1; i < records.size(); ++i)
        if (!(records[i].t > records[i - 1].t))
            throw std::invalid_argument("timeseries: sample times must be strictly increasing");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "t,mass,energy,max_density,finite\n";
    for (const auto& r : records) {
        out << fmt(r.t) << ',' << fmt(r.mass) << ',' << fmt(r.energy) << ',' << fmt(r.max_density)
            << ',' << (r.finite ? 1 : 0) << '\n';
    }
    out.flush();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace gpe
