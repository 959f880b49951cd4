#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dqpt/errors.hpp"

namespace dqpt::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(field, "expected a number, got '" + text + "'");
    return v;
}

long long parse_integer(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(field, "expected an integer, got '" + text + "'");
    return v;
}

int parse_int(const std::string& field, const std::string& text) {
    const long long v = parse_integer(field, text);
    if (v < -(1LL << 30) || v > (1LL << 30)) throw ConfigError(field, "value out of range");
    return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(field, item));
    if (out.empty()) throw ConfigError(field, "empty list");
    return out;
}

// Wraps the library parsers so their errors carry the field name.
template <class F>
auto parse_enum(const std::string& field, const std::string& text, F parser) {
    try {
        return parser(trim(text));
    } catch (const InvalidArgument& e) {
        throw ConfigError(field, e.what());
    }
}

std::vector<double> default_fields(Command c) {
    switch (c) {
        case Command::rate_function: return {0.5, 0.8, 1.2};
        case Command::heatmap:
        case Command::otoc:
        case Command::spectra: return {1.2, 0.8};
        case Command::oracle_compare: return {0.5, 0.8, 1.2, 1.5};
        case Command::pulse_schedule: return {1.2};
    }
    return {};
}

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::rate_function: return "rate-function";
        case Command::heatmap: return "heatmap";
        case Command::otoc: return "otoc";
        case Command::spectra: return "spectra";
        case Command::oracle_compare: return "oracle-compare";
        case Command::pulse_schedule: return "pulse-schedule";
    }
    return "?";
}

Command parse_command(const std::string& text) {
    for (Command c : {Command::rate_function, Command::heatmap, Command::otoc, Command::spectra,
                      Command::oracle_compare, Command::pulse_schedule})
        if (to_string(c) == text) return c;
    throw ConfigError("command", "unknown subcommand '" + text + "'");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw InvalidArgument("unknown format '" + text + "' (expected csv|json)");
}

std::string to_string(OracleMode m) { return m == OracleMode::matched ? "matched" : "literal"; }

OracleMode parse_oracle_mode(const std::string& text) {
    if (text == "matched") return OracleMode::matched;
    if (text == "literal") return OracleMode::literal;
    throw InvalidArgument("unknown oracle mode '" + text + "' (expected matched|literal)");
}

void set_field(RunConfig& cfg, const std::string& field, const std::string& value) {
    if (field == "quench.g_i") cfg.g_i = parse_double(field, value);
    else if (field == "quench.g_f") cfg.g_f = parse_list(field, value);
    else if (field == "quench.n_spins") cfg.n_spins = parse_int(field, value);
    else if (field == "quench.grid") cfg.grid = parse_enum(field, value, parse_grid_mode);
    else if (field == "echo.n_phi") cfg.n_phi = parse_int(field, value);
    else if (field == "echo.aggregation") cfg.aggregation = parse_enum(field, value, parse_aggregation);
    else if (field == "echo.time_axis") cfg.time_axis = parse_enum(field, value, parse_time_axis);
    else if (field == "echo.m_max") cfg.m_max = parse_int(field, value);
    else if (field == "echo.dw_threshold") cfg.dw_threshold = parse_double(field, value);
    else if (field == "time.t_max") cfg.t_max = parse_double(field, value);
    else if (field == "time.steps") cfg.steps = parse_int(field, value);
    else if (field == "oracle.mode") cfg.oracle_mode = parse_enum(field, value, parse_oracle_mode);
    else if (field == "oracle.bc") cfg.bc = parse_enum(field, value, parse_boundary);
    else if (field == "oracle.tolerance") cfg.tolerance = parse_double(field, value);
    else if (field == "pulse.constant") cfg.pulse_constant = parse_double(field, value);
    else if (field == "pulse.n_t") cfg.n_t = parse_int(field, value);
    else if (field == "outputs.dir") cfg.out_dir = trim(value);
    else if (field == "outputs.format") cfg.format = parse_enum(field, value, parse_format);
    else if (field == "run.threads") cfg.threads = parse_int(field, value);
    else if (field == "run.seed") {
        const long long s = parse_integer(field, value);
        require(s >= 0, field, "seed must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
    } else
        throw ConfigError(field, "unknown configuration key");
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
    std::stringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.resize(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config", "line " + std::to_string(line_no) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config", "line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw ConfigError("config", "line " + std::to_string(line_no) + ": key outside a section");
        set_field(cfg, section + "." + trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    apply_config_text(cfg, buffer.str());
}

RunConfig resolve(const RunConfig& cfg) {
    RunConfig r = cfg;
    const bool oracle = r.command == Command::oracle_compare;
    if (!r.g_f) r.g_f = default_fields(r.command);
    if (!r.n_spins) r.n_spins = oracle ? 8 : 30;
    if (!r.grid) r.grid = oracle ? GridMode::abc : GridMode::paper;
    if (!r.n_phi) r.n_phi = oracle ? 16 : 64;
    if (!r.t_max) r.t_max = r.time_axis == TimeAxis::normalized && !oracle ? 1.0 : 5.0;
    if (!r.steps) {
        switch (r.command) {
            case Command::rate_function: r.steps = 2000; break;
            case Command::heatmap: r.steps = 201; break;
            case Command::otoc:
            case Command::spectra: r.steps = 101; break;
            case Command::oracle_compare: r.steps = 100; break;
            case Command::pulse_schedule: r.steps = 2; break;
        }
    }
    return r;
}

void validate(const RunConfig& cfg) {
    require(std::isfinite(cfg.g_i), "quench.g_i", "must be finite");
    require(cfg.g_f && !cfg.g_f->empty(), "quench.g_f", "needs at least one value");
    for (double g : *cfg.g_f) require(std::isfinite(g), "quench.g_f", "must be finite");
    const int n = *cfg.n_spins;
    require(n >= 2, "quench.n_spins", "N must be >= 2, got " + std::to_string(n));
    require(n <= 1000000, "quench.n_spins", "N above 10^6 is not supported");
    require(*cfg.n_phi >= 1, "echo.n_phi", "must be positive");
    require(cfg.m_max >= 0, "echo.m_max", "must be >= 0");
    require(cfg.dw_threshold >= 0 && std::isfinite(cfg.dw_threshold), "echo.dw_threshold",
            "must be a finite non-negative number");
    require(*cfg.t_max > 0 && std::isfinite(*cfg.t_max), "time.t_max", "must be finite and positive");
    require(*cfg.steps >= 2, "time.steps", "need at least 2 samples");
    require(cfg.tolerance > 0 && std::isfinite(cfg.tolerance), "oracle.tolerance",
            "must be finite and positive");
    require(cfg.pulse_constant > 0 && std::isfinite(cfg.pulse_constant), "pulse.constant",
            "C must be finite and positive");
    require(cfg.n_t >= 2, "pulse.n_t", "n_T must be >= 2");
    require(cfg.threads >= 0, "run.threads", "must be >= 0");
    require(!cfg.out_dir.empty(), "outputs.dir", "must not be empty");

    // Every mode of the initial Hamiltonian needs a gap to define the ground state.
    QuenchSpec spec;
    spec.g_i = cfg.g_i;
    spec.n_spins = n;
    spec.grid = *cfg.grid;
    for (double k : momentum_grid(spec))
        require(!is_gapless(bloch_vector(cfg.g_i, k)), "quench.g_i",
                "initial field closes the gap at k = " + std::to_string(k));

    switch (cfg.command) {
        case Command::otoc:
        case Command::spectra:
            require(*cfg.n_phi >= 2 * cfg.m_max + 1, "echo.n_phi",
                    "N_phi = " + std::to_string(*cfg.n_phi) + " cannot resolve |m| <= " +
                        std::to_string(cfg.m_max) + " (need N_phi >= 2 m_max + 1)");
            require(*cfg.n_phi >= 3, "echo.n_phi", "the A_1 signature needs N_phi >= 3");
            break;
        case Command::oracle_compare:
            require(n <= kMaxChainSites, "quench.n_spins",
                    "exact diagonalization supports N <= " + std::to_string(kMaxChainSites));
            require(cfg.g_i == 0.0, "quench.g_i", "the chain oracle starts from the g = 0 ground state");
            if (cfg.oracle_mode == OracleMode::matched) {
                require(n >= 4 && n % 2 == 0, "quench.n_spins", "matched oracle needs even N >= 4");
                require(cfg.bc == Boundary::periodic, "oracle.bc", "matched oracle is periodic only");
            }
            break;
        default: break;
    }
}

nlohmann::json to_json(const RunConfig& r) {
    nlohmann::json j;
    j["command"] = to_string(r.command);
    j["quench"] = {{"g_i", r.g_i},
                   {"g_f", *r.g_f},
                   {"n_spins", *r.n_spins},
                   {"grid", to_string(*r.grid)}};
    j["echo"] = {{"n_phi", *r.n_phi},
                 {"aggregation", to_string(r.aggregation)},
                 {"time_axis", to_string(r.time_axis)},
                 {"m_max", r.m_max},
                 {"dw_threshold", r.dw_threshold}};
    j["time"] = {{"t_max", *r.t_max}, {"steps", *r.steps}};
    j["oracle"] = {{"mode", to_string(r.oracle_mode)},
                   {"bc", to_string(r.bc)},
                   {"tolerance", r.tolerance}};
    j["pulse"] = {{"constant", r.pulse_constant}, {"n_t", r.n_t}};
    j["outputs"] = {{"format", to_string(r.format)}};
    j["run"] = {{"seed", r.seed}};
    return j;
}

}  // namespace dqpt::cli
