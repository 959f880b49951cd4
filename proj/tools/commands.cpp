#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "dqpt/chain.hpp"
#include "dqpt/errors.hpp"
#include "dqpt/kernels.hpp"

namespace dqpt::cli {

namespace {

QuenchSpec make_spec(const RunConfig& cfg, double g_f) {
    QuenchSpec s;
    s.g_i = cfg.g_i;
    s.g_f = g_f;
    s.n_spins = *cfg.n_spins;
    s.grid = *cfg.grid;
    return s;
}

std::vector<double> time_grid(const RunConfig& cfg) { return linspace(0.0, *cfg.t_max, *cfg.steps); }

void rate_function_cmd(const RunConfig& cfg, RunResult& result) {
    Table table{{"g_f", "t", "rate", "floored_modes"}, {}};
    nlohmann::json critical;
    critical["g_i"] = cfg.g_i;
    critical["series"] = nlohmann::json::array();
    const auto times = time_grid(cfg);
    for (double g_f : *cfg.g_f) {
        const auto series = kernels::rate_series(loschmidt_table(make_spec(cfg, g_f)), times);
        for (std::size_t j = 0; j < times.size(); ++j)
            table.add({g_f, times[j], series[j].rate, static_cast<long long>(series[j].floored_modes)});

                // g_i + g_f = 0 has no critical momentum; the predicate already says so.
        const bool dqpt = dqpt_predicate(cfg.g_i, g_f);
        const auto k_star = dqpt ? critical_momentum(cfg.g_i, g_f) : std::nullopt;
        nlohmann::json entry = {{"g_f", g_f}, {"dqpt", dqpt}};
        entry["k_star"] = k_star ? nlohmann::json(*k_star) : nlohmann::json();
        entry["t_c"] = k_star ? nlohmann::json(critical_times(cfg.g_i, g_f)) : nlohmann::json::array();
        critical["series"].push_back(entry);
    }
    result.outputs.add_table("rate_function", table, cfg.format);
    result.outputs.add_text("critical_times.json", critical.dump(2) + "\n");
}

void heatmap_cmd(const RunConfig& cfg, RunResult& result) {
    Table table{{"g_f", "k", "t_over_t0", "probability"}, {}};
    for (double g_f : *cfg.g_f) {
        const auto map = return_probability_map(make_spec(cfg, g_f), *cfg.steps);
        for (std::size_t r = 0; r < map.k.size(); ++r)
            for (std::size_t c = 0; c < map.t_over_t0.size(); ++c)
                table.add({g_f, map.k[r], map.t_over_t0[c], map.probability[r][c]});
    }
    result.outputs.add_table("return_prob", table, cfg.format);
}

void otoc_cmd(const RunConfig& cfg, RunResult& result, bool spectra_only) {
    Table surface{{"g_f", "phi", "t", "fidelity", "magnetization"}, {}};
    Table spectra{{"g_f", "observable", "t", "m", "re", "im", "abs"}, {}};
    nlohmann::json wells;
    wells["detector"] = {{"axis", "t_over_t0"},
                         {"t_c", 0.5},
                         {"window", 0.5},
                         {"threshold", cfg.dw_threshold},
                         {"n_phi", *cfg.n_phi},
                         {"n_time", 201},
                         {"series", "Re A_1 of the mode-averaged magnetization"}};
    wells["series"] = nlohmann::json::array();

    const auto phis = phi_grid(*cfg.n_phi);
    const auto times = time_grid(cfg);
    for (double g_f : *cfg.g_f) {
        const QuenchSpec spec = make_spec(cfg, g_f);
        const auto s = kernels::echo_surfaces(build_ensemble(spec), phis, times, cfg.aggregation,
                                              cfg.time_axis);
        for (std::size_t j = 0; j < times.size(); ++j) {
            const std::pair<const char*, const Surface*> observables[] = {{"I", &s.fidelity},
                                                                          {"A", &s.magnetization}};
            for (const auto& [name, surf] : observables) {
                const MqcSpectrum mqc = mqc_spectrum(surf->column(j), cfg.m_max);
                for (int m = -cfg.m_max; m <= cfg.m_max; ++m) {
                    const Complex c = mqc.at(m);
                    spectra.add({g_f, std::string(name), times[j], static_cast<long long>(m), c.real(),
                                 c.imag(), std::abs(c)});
                }
            }
        }
        if (spectra_only) continue;
        for (std::size_t i = 0; i < phis.size(); ++i)
            for (std::size_t j = 0; j < times.size(); ++j)
                surface.add({g_f, phis[i], times[j], s.fidelity.at(i, j), s.magnetization.at(i, j)});

        SignatureOptions opts;
        opts.n_phi = *cfg.n_phi;
        opts.threshold = cfg.dw_threshold;
        const SignatureReport sig = dqpt_signature(spec, opts);
        wells["series"].push_back({{"g_f", g_f},
                                   {"classification", to_string(sig.well.shape)},
                                   {"prominence", sig.well.prominence},
                                   {"t_min_over_t0", sig.well.t_min},
                                   {"dqpt_predicate", dqpt_predicate(cfg.g_i, g_f)}});
        result.summary += "g_f=" + format_double(g_f) + ": " + to_string(sig.well.shape) + "\n";
    }
    if (!spectra_only) result.outputs.add_table("otoc_surface", surface, cfg.format);
    result.outputs.add_table("spectra", spectra, cfg.format);
    if (!spectra_only) result.outputs.add_text("doublewell.json", wells.dump(2) + "\n");
}

struct Worst {
    double diff = -1.0;
    std::string where;
};

void oracle_compare_cmd(const RunConfig& cfg, RunResult& result) {
    Table table{{"g_f", "quantity", "t", "phi", "momentum", "chain", "abs_diff"}, {}};
    Worst worst;
    auto record = [&](double g_f, const char* quantity, double t, Cell phi, double mom, double chain) {
        const double diff = std::abs(mom - chain);
        table.add({g_f, std::string(quantity), t, phi, mom, chain, diff});
        if (!(diff <= worst.diff)) {
            worst.diff = std::isnan(diff) ? INFINITY : diff;
            worst.where = std::string(quantity) + " at g_f=" + format_double(g_f) + ", t=" +
                          format_double(t) +
                          (std::holds_alternative<double>(phi) ? ", phi=" + format_double(std::get<double>(phi)) : "");
        }
    };

    const auto rate_times = time_grid(cfg);
    const auto echo_times = linspace(0.0, *cfg.t_max, 20);
    const auto phis = phi_grid(*cfg.n_phi);
    const int n = *cfg.n_spins;
    const bool matched = cfg.oracle_mode == OracleMode::matched;
    for (double g_f : *cfg.g_f) {
        const QuenchSpec spec = make_spec(cfg, g_f);
        const auto rates = kernels::rate_series(loschmidt_table(spec), rate_times);
        const auto surfaces = kernels::echo_surfaces(build_ensemble(spec), phis, echo_times,
                                                     Aggregation::product, TimeAxis::absolute);
        if (matched) {
            const SectorMatchedOracle oracle(n, g_f);
            for (std::size_t j = 0; j < rate_times.size(); ++j)
                record(g_f, "rate", rate_times[j], std::string(), rates[j].rate,
                       oracle.rate_function(rate_times[j]).rate);
            for (std::size_t i = 0; i < phis.size(); ++i)
                for (std::size_t j = 0; j < echo_times.size(); ++j) {
                    const auto e = oracle.echo(echo_times[j], phis[i]);
                    record(g_f, "fidelity", echo_times[j], phis[i], surfaces.fidelity.at(i, j), e.fidelity);
                    record(g_f, "magnetization", echo_times[j], phis[i], surfaces.magnetization.at(i, j),
                           e.magnetization);
                }
        } else {
            const ChainQuench chain(n, g_f, cfg.bc);
            for (std::size_t j = 0; j < rate_times.size(); ++j)
                record(g_f, "rate", rate_times[j], std::string(), rates[j].rate,
                       chain.rate_function(rate_times[j]).rate);
            for (std::size_t i = 0; i < phis.size(); ++i)
                for (std::size_t j = 0; j < echo_times.size(); ++j) {
                    const auto e = chain.echo(echo_times[j], phis[i]);
                    record(g_f, "fidelity", echo_times[j], phis[i], surfaces.fidelity.at(i, j), e.fidelity);
                    record(g_f, "magnetization", echo_times[j], phis[i], surfaces.magnetization.at(i, j),
                           e.magnetization);
                }
        }
    }
    result.outputs.add_table("compare", table, cfg.format);
    std::ostringstream line;
    line << "max |diff| = " << format_double(worst.diff) << " (" << worst.where << "), tolerance "
         << format_double(cfg.tolerance) << "\n";
    result.summary += line.str();
    if (!(worst.diff < cfg.tolerance)) result.exit_code = kToleranceFailure;
}

void pulse_schedule_cmd(const RunConfig& cfg, RunResult& result) {
    constexpr double kReplayThreshold = 1e-12;
    Table table{{"g_f", "k", "axis_angle", "rabi_rate", "duration_index", "duration", "idle"}, {}};
    double max_dev = 0.0;
    long long pulses = 0;
    long long idle = 0;
    for (double g_f : *cfg.g_f) {
        for (const auto& e : pulse_schedule(make_spec(cfg, g_f), cfg.pulse_constant, cfg.n_t)) {
            if (e.idle) {
                ++idle;
                table.add({g_f, e.k, 0.0, 0.0, -1LL, 0.0, 1LL});
                continue;
            }
            const BlochVector d = bloch_vector(g_f, e.k);
            for (std::size_t j = 0; j < e.durations.size(); ++j) {
                const double T = e.durations[j];
                table.add({g_f, e.k, e.axis_angle, e.rabi_rate, static_cast<long long>(j), T, 0LL});
                max_dev = std::max(max_dev, max_abs_diff_up_to_phase(e.replay(T),
                                                                     evolution_unitary(d, e.model_time(T))));
                ++pulses;
            }
        }
    }
    const bool pass = max_dev < kReplayThreshold;
    const nlohmann::json check = {{"max_deviation", max_dev},
                                  {"threshold", kReplayThreshold},
                                  {"pass", pass},
                                  {"pulses", pulses},
                                  {"idle_modes", idle},
                                  {"pulse_constant", cfg.pulse_constant},
                                  {"n_t", cfg.n_t}};
    result.outputs.add_table("schedule", table, cfg.format);
    result.outputs.add_text("replay_check.json", check.dump(2) + "\n");
    result.summary += "replay max deviation " + format_double(max_dev) + "\n";
    if (!pass) result.exit_code = kToleranceFailure;
}

}  // namespace

RunResult execute(const RunConfig& cfg) {
    RunResult result;
    switch (cfg.command) {
        case Command::rate_function: rate_function_cmd(cfg, result); break;
        case Command::heatmap: heatmap_cmd(cfg, result); break;
        case Command::otoc: otoc_cmd(cfg, result, false); break;
        case Command::spectra: otoc_cmd(cfg, result, true); break;
        case Command::oracle_compare: oracle_compare_cmd(cfg, result); break;
        case Command::pulse_schedule: pulse_schedule_cmd(cfg, result); break;
    }
    return result;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig resolved = resolve(cfg);
        validate(resolved);
        if (resolved.threads > 0) kernels::set_thread_count(resolved.threads);
        const auto start = std::chrono::steady_clock::now();
        const RunResult result = execute(resolved);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.outputs.commit(resolved.out_dir, to_json(resolved), seconds);
        out << result.summary;
        if (result.exit_code == kToleranceFailure) err << "error: tolerance check failed\n";
        return result.exit_code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return kConfigError;
    }
}

}  // namespace dqpt::cli
