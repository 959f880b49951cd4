#include "dqpt/echo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "dqpt/errors.hpp"
#include "dqpt/kernels.hpp"

namespace dqpt {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

std::string to_string(Aggregation a) { return a == Aggregation::mean ? "mean" : "product"; }
std::string to_string(TimeAxis a) { return a == TimeAxis::absolute ? "absolute" : "normalized"; }
std::string to_string(WellShape s) {
    return s == WellShape::double_well ? "double_well" : "single_well";
}

Aggregation parse_aggregation(const std::string& text) {
    if (text == "mean") return Aggregation::mean;
    if (text == "product") return Aggregation::product;
    throw InvalidArgument("unknown aggregation '" + text + "' (expected mean|product)");
}

TimeAxis parse_time_axis(const std::string& text) {
    if (text == "absolute") return TimeAxis::absolute;
    if (text == "normalized") return TimeAxis::normalized;
    throw InvalidArgument("unknown time axis '" + text + "' (expected absolute|normalized)");
}

std::vector<double> phi_grid(int n_phi) {
    if (n_phi < 1) throw InvalidArgument("phi grid needs at least one point");
    std::vector<double> phi(static_cast<std::size_t>(n_phi));
    for (int j = 0; j < n_phi; ++j) phi[static_cast<std::size_t>(j)] = 2.0 * kPi * j / n_phi;
    return phi;
}

void EchoConfig::validate(int m_max) const {
    spec.validate();
    if (m_max < 0) throw InvalidArgument("m_max must be >= 0");
    if (n_phi < 2 * m_max + 1)
        throw AliasingError("N_phi = " + std::to_string(n_phi) + " cannot resolve |m| <= " +
                            std::to_string(m_max) + " (need N_phi >= 2 m_max + 1)");
    if (times.empty()) throw InvalidArgument("echo time grid is empty");
    for (double t : times)
        if (!std::isfinite(t)) throw InvalidArgument("echo time grid has a non-finite entry");
}

std::vector<double> Surface::column(std::size_t i_t) const {
    std::vector<double> c(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) c[i] = at(i, i_t);
    return c;
}

double mode_time(const Mode& mode, double t, TimeAxis axis) {
    if (axis == TimeAxis::absolute) return t;
    const double gap = mode.h_f.norm();
    return gap <= kGapTolerance ? 0.0 : t * kPi / gap;
}

QubitState echo_state(const Mode& mode, double t, double phi) {
    const QubitState forward = evolution_unitary(mode.h_f, t) * mode.psi0;
    const QubitState rotated = rotation_x(phi) * forward;
    // Reversal by flipping the sign of the Hamiltonian.
    return evolution_unitary(-mode.h_f, t) * rotated;
}

Surface fidelity_otoc(const EchoConfig& config) {
    config.validate(0);
    const ModeEnsemble ensemble = build_ensemble(config.spec);
    const auto phis = phi_grid(config.n_phi);
    return kernels::echo_surfaces(ensemble, phis, config.times, config.aggregation,
                                  config.time_axis)
        .fidelity;
}

Surface magnetization_otoc(const EchoConfig& config) {
    if (config.aggregation == Aggregation::product)
        throw ConfigError("aggregation",
                          "magnetization is intensive; only mean aggregation is defined");
    config.validate(0);
    const ModeEnsemble ensemble = build_ensemble(config.spec);
    const auto phis = phi_grid(config.n_phi);
    return kernels::echo_surfaces(ensemble, phis, config.times, Aggregation::mean,
                                  config.time_axis)
        .magnetization;
}

MqcSpectrum::MqcSpectrum(int m_max, std::vector<Complex> components)
    : m_max_(m_max), components_(std::move(components)) {
    if (components_.size() != static_cast<std::size_t>(2 * m_max_ + 1))
        throw InvalidArgument("MqcSpectrum: component count does not match m_max");
}

Complex MqcSpectrum::at(int m) const {
    if (m < -m_max_ || m > m_max_) throw RangeError("coherence order outside spectrum");
    return components_[static_cast<std::size_t>(m + m_max_)];
}

Complex MqcSpectrum::reconstruct(double phi) const {
    Complex s{0.0, 0.0};
    for (int m = -m_max_; m <= m_max_; ++m) s += at(m) * std::polar(1.0, m * phi);
    return s;
}

Complex MqcSpectrum::sum() const {
    Complex s{0.0, 0.0};
    for (const Complex& c : components_) s += c;
    return s;
}

MqcSpectrum mqc_spectrum(std::span<const double> signal, int m_max) {
    if (m_max < 0) throw InvalidArgument("m_max must be >= 0");
    const auto n = static_cast<int>(signal.size());
    if (n < 2 * m_max + 1)
        throw AliasingError("N_phi = " + std::to_string(n) + " cannot resolve |m| <= " +
                            std::to_string(m_max));
    std::vector<Complex> c(static_cast<std::size_t>(2 * m_max + 1));
    for (int m = -m_max; m <= m_max; ++m) {
        Complex acc{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            // Reduce m j mod n so the twiddle angle stays small and exact.
            const long long r = ((static_cast<long long>(m) * j) % n + n) % n;
            acc += signal[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * kPi * r / n);
        }
        c[static_cast<std::size_t>(m + m_max)] = acc / static_cast<double>(n);
    }
    return MqcSpectrum(m_max, std::move(c));
}

std::vector<MqcSpectrum> spectrum_dynamics(const EchoConfig& config, Observable observable,
                                           int m_max) {
    config.validate(m_max);
    const Surface surface = observable == Observable::fidelity ? fidelity_otoc(config)
                                                               : magnetization_otoc(config);
    std::vector<MqcSpectrum> out;
    out.reserve(surface.t.size());
    for (std::size_t j = 0; j < surface.t.size(); ++j)
        out.push_back(mqc_spectrum(surface.column(j), m_max));
    return out;
}

Complex otoc_general(const Unitary2& w, const Unitary2& v, const BlochVector& d, double t,
                     const QubitState& psi0, HeisenbergConvention convention) {
    constexpr double kTol = 1e-10;
    if (unitarity_defect(w) > kTol) throw InvalidArgument("otoc_general: W is not unitary");
    if (unitarity_defect(v) > kTol) throw InvalidArgument("otoc_general: V is not unitary");
    const Unitary2 u = evolution_unitary(d, t);
    const Unitary2 w_t = convention == HeisenbergConvention::paper ? u * w * u.adjoint()
                                                                   : u.adjoint() * w * u;
    const QubitState out = w_t.adjoint() * (v.adjoint() * (w_t * (v * psi0)));
    return inner(psi0, out);
}

WellReport double_well_detector(std::span<const double> times, std::span<const double> series,
                                double t_c, double window, double threshold) {
    if (times.size() != series.size())
        throw InvalidArgument("double_well_detector: times and series differ in length");
    if (times.size() < 3) throw InvalidArgument("double_well_detector: need at least 3 samples");
    if (!(window > 0.0)) throw InvalidArgument("double_well_detector: window must be positive");
    const std::size_t n = times.size();
    const double step = (times.back() - times.front()) / static_cast<double>(n - 1);
    if (!(step > 0.0)) throw InvalidArgument("double_well_detector: time grid must increase");
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(times[j] - times[j - 1] - step) > 1e-9 * std::max(1.0, std::abs(step)) + 1e-12)
            throw InvalidArgument("double_well_detector: time grid is not uniform");

    const double slack = 1e-9 * step;
    const double lo_t = t_c - window;
    const double hi_t = t_c + window;
    if (lo_t < times.front() - slack || hi_t > times.back() + slack)
        throw RangeError("double_well_detector: window lies outside the sampled range");

    std::size_t lo = 0;
    while (times[lo] < lo_t - slack) ++lo;
    std::size_t hi = n - 1;
    while (times[hi] > hi_t + slack) --hi;
    if (hi < lo + 2) return {};

    auto is_max = [&](std::size_t j) {
        if (j == lo) return series[j] > series[j + 1];
        if (j == hi) return series[j] > series[j - 1];
        return series[j] > series[j - 1] && series[j] > series[j + 1];
    };

    WellReport best;
    for (std::size_t j = lo + 1; j < hi; ++j) {
        if (!(series[j] < series[j - 1] && series[j] < series[j + 1])) continue;
        std::optional<std::size_t> left;
        for (std::size_t i = j; i-- > lo;) {
            if (is_max(i)) {
                left = i;
                break;
            }
        }
        std::optional<std::size_t> right;
        for (std::size_t i = j + 1; i <= hi; ++i) {
            if (is_max(i)) {
                right = i;
                break;
            }
        }
        if (!left || !right) continue;
        const double prominence = std::min(series[*left], series[*right]) - series[j];
        if (prominence > best.prominence) {
            best.prominence = prominence;
            best.t_min = times[j];
        }
    }
    best.shape = best.prominence >= threshold && best.prominence > 0.0 ? WellShape::double_well
                                                                       : WellShape::single_well;
    return best;
}

SignatureReport dqpt_signature(const QuenchSpec& spec, const SignatureOptions& options) {
    EchoConfig config;
    config.spec = spec;
    config.n_phi = options.n_phi;
    config.times = linspace(0.0, 1.0, options.n_time);
    config.aggregation = Aggregation::mean;
    config.time_axis = TimeAxis::normalized;

    const auto spectra = spectrum_dynamics(config, Observable::magnetization, 1);
    SignatureReport report;
    report.t_over_t0 = config.times;
    report.a1.reserve(spectra.size());
    for (const auto& s : spectra) report.a1.push_back(s.at(1).real());
    report.well = double_well_detector(report.t_over_t0, report.a1, 0.5, 0.5, options.threshold);
    return report;
}

}  // namespace dqpt
