#include "dqpt/quench.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dqpt/errors.hpp"

namespace dqpt {

namespace {

constexpr double kPi = std::numbers::pi;

double sign_factor(SignConvention sign) {
    return sign == SignConvention::ferro_ground ? -1.0 : 1.0;
}

BlochVector scaled(const BlochVector& d, double s) { return {s * d.x, s * d.y, s * d.z}; }

// Bloch vector of U (h . sigma) U^dag.
BlochVector conjugate_vector(const Unitary2& u, const BlochVector& h) {
    const Unitary2 m = u * pauli_matrix(h) * u.adjoint();
    return {0.5 * (m(0, 1).real() + m(1, 0).real()),
            0.5 * (m(1, 0).imag() - m(0, 1).imag()),
            0.5 * (m(0, 0).real() - m(1, 1).real())};
}

std::string format_k(double k) {
    std::ostringstream os;
    os.precision(17);
    os << k;
    return os.str();
}

}  // namespace

std::string to_string(GridMode mode) { return mode == GridMode::paper ? "paper" : "abc"; }

GridMode parse_grid_mode(const std::string& text) {
    if (text == "paper") return GridMode::paper;
    if (text == "abc") return GridMode::abc;
    throw InvalidArgument("unknown grid mode '" + text + "' (expected paper|abc)");
}

void QuenchSpec::validate() const {
    if (n_spins < 2) throw InvalidArgument("N must be >= 2");
    if (!std::isfinite(g_i) || !std::isfinite(g_f))
        throw InvalidArgument("transverse fields must be finite");
}

std::vector<double> momentum_grid(const QuenchSpec& spec) {
    spec.validate();
    const int n = spec.n_spins;
    std::vector<double> k;
    if (spec.grid == GridMode::paper) {
        k.reserve(static_cast<std::size_t>(n) + 1);
        for (int j = 0; j <= n; ++j) k.push_back(2.0 * kPi * j / n);
    } else {
        k.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) k.push_back((2.0 * j + 1.0) * kPi / n);
    }
    return k;
}

BlochVector bloch_vector(double g, double k) {
    return {1.0 - g * std::cos(k), g * std::sin(k), 0.0};
}

bool is_gapless(const BlochVector& d) { return d.norm() <= kGapTolerance; }

Unitary2 frame_transform(double g_i, double k, SignConvention sign) {
    const BlochVector d_i = bloch_vector(g_i, k);
    if (is_gapless(d_i))
        throw GaplessModeError("gapless initial mode at k = " + format_k(k), k);
    const BlochVector h0 = scaled(d_i, sign_factor(sign));

    const QubitState ground = ground_state(h0);
    const QubitState excited = ground_state(-h0);
    Unitary2 s;
    s(0, 0) = ground[0];
    s(1, 0) = ground[1];
    s(0, 1) = excited[0];
    s(1, 1) = excited[1];

    const double r = 1.0 / std::sqrt(2.0);
    Unitary2 p;
    p(0, 0) = r;
    p(1, 0) = r;
    p(0, 1) = r;
    p(1, 1) = -r;
    return p * s.adjoint();
}

Complex loschmidt_mode(const QuenchSpec& spec, double k, double t) {
    if (!std::isfinite(t)) throw InvalidArgument("loschmidt_mode: non-finite time");
    const BlochVector d_i = bloch_vector(spec.g_i, k);
    const BlochVector d_f = bloch_vector(spec.g_f, k);
    if (is_gapless(d_i))
        throw GaplessModeError("gapless initial mode at k = " + format_k(k), k);
    const double gap = d_f.norm();
    if (gap <= kGapTolerance) return Complex{1.0, 0.0};
    const double c = dot(d_i, d_f) / (d_i.norm() * gap);
    return Complex{std::cos(gap * t), c * std::sin(gap * t)};
}

Complex LoschmidtTable::amplitude(std::size_t mode, double t) const {
    const double w = gap[mode] * t;
    return Complex{std::cos(w), overlap[mode] * std::sin(w)};
}

double LoschmidtTable::probability(std::size_t mode, double t) const {
    const double w = gap[mode] * t;
    const double c = std::cos(w);
    const double s = std::sin(w);
    // Near a Fisher zero cos^2 + c^2 sin^2 keeps relative accuracy; near no
    // quench the loss form avoids 1 - c^2 cancellation.
    const double p = loss[mode] < 0.5 ? 1.0 - loss[mode] * s * s
                                      : c * c + overlap[mode] * overlap[mode] * s * s;
    return std::clamp(p, 0.0, 1.0);
}

LoschmidtTable loschmidt_table(const QuenchSpec& spec) {
    LoschmidtTable table;
    table.n_spins = spec.n_spins;
    table.k = momentum_grid(spec);
    table.gap.reserve(table.k.size());
    table.overlap.reserve(table.k.size());
    table.loss.reserve(table.k.size());
    for (double k : table.k) {
        const BlochVector d_i = bloch_vector(spec.g_i, k);
        const BlochVector d_f = bloch_vector(spec.g_f, k);
        if (is_gapless(d_i))
            throw GaplessModeError("gapless initial mode at k = " + format_k(k), k);
        const double gap = d_f.norm();
        if (gap <= kGapTolerance) {
            table.gap.push_back(0.0);
            table.overlap.push_back(1.0);
            table.loss.push_back(0.0);
        } else {
            const double scale = d_i.norm() * gap;
            const double cx = d_i.y * d_f.z - d_i.z * d_f.y;
            const double cy = d_i.z * d_f.x - d_i.x * d_f.z;
            const double cz = d_i.x * d_f.y - d_i.y * d_f.x;
            const double sine = std::sqrt(cx * cx + cy * cy + cz * cz) / scale;
            table.gap.push_back(gap);
            table.overlap.push_back(dot(d_i, d_f) / scale);
            table.loss.push_back(std::min(sine * sine, 1.0));
        }
    }
    return table;
}

RatePoint rate_function(const LoschmidtTable& table, double t) {
    if (!std::isfinite(t)) throw InvalidArgument("rate_function: non-finite time");
    RatePoint point;
    point.t = t;
    double sum = 0.0;
    for (std::size_t m = 0; m < table.size(); ++m) {
        double p = table.probability(m, t);
        if (p < kProbabilityFloor) {
            p = kProbabilityFloor;
            ++point.floored_modes;
        }
        sum += std::log(p);
    }
    point.rate = -sum / table.n_spins;
    return point;
}

RatePoint rate_function(const QuenchSpec& spec, double t) {
    return rate_function(loschmidt_table(spec), t);
}

std::optional<double> critical_momentum(double g_i, double g_f) {
    if (g_i + g_f == 0.0)
        throw InvalidArgument("critical_momentum: undefined for g_i + g_f = 0");
    const double arg = (1.0 + g_i * g_f) / (g_i + g_f);
    if (std::abs(arg) >= 1.0) return std::nullopt;
    return std::acos(arg);
}

std::vector<double> critical_times(double g_i, double g_f, int n_max) {
    if (n_max < 0) throw InvalidArgument("critical_times: n_max must be >= 0");
    const std::optional<double> k_star =
        g_i + g_f == 0.0 ? std::nullopt : critical_momentum(g_i, g_f);
    if (!k_star) throw NoDqptError("no critical momentum: quench does not cross the critical field");
    const double gap = bloch_vector(g_f, *k_star).norm();
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) times.push_back(kPi / gap * (n + 0.5));
    return times;
}

bool dqpt_predicate(double g_i, double g_f) {
    return (1.0 - std::abs(g_i)) * (1.0 - std::abs(g_f)) < 0.0;
}

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 2) throw InvalidArgument("linspace: need at least 2 points");
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) v[static_cast<std::size_t>(j)] = lo + (hi - lo) * j / (points - 1);
    return v;
}

std::vector<double> default_time_grid(double g_i, double g_f, int points) {
    if (dqpt_predicate(g_i, g_f)) return linspace(0.0, 3.0 * critical_times(g_i, g_f, 0)[0], points);
    return linspace(0.0, 10.0, points);
}

ReturnProbabilityMap return_probability_map(const QuenchSpec& spec, int n_t) {
    if (n_t < 2) throw InvalidArgument("return_probability_map: n_t must be >= 2");
    const LoschmidtTable table = loschmidt_table(spec);
    ReturnProbabilityMap map;
    map.k = table.k;
    map.t_over_t0 = linspace(0.0, 2.0, n_t);
    map.probability.reserve(table.size());
    for (std::size_t m = 0; m < table.size(); ++m) {
        std::vector<double> row(map.t_over_t0.size(), 1.0);
        if (table.gap[m] > 0.0) {
            const double t0 = kPi / table.gap[m];
            for (std::size_t j = 0; j < row.size(); ++j)
                row[j] = table.probability(m, map.t_over_t0[j] * t0);
        }
        map.probability.push_back(std::move(row));
    }
    return map;
}

Unitary2 PulseScheduleEntry::replay(double duration) const {
    if (idle) return Unitary2::identity();
    const double theta = rabi_rate * duration;
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const double nx = std::cos(axis_angle);
    const double ny = std::sin(axis_angle);
    Unitary2 u;
    u(0, 0) = c;
    u(0, 1) = Complex{-s * ny, -s * nx};
    u(1, 0) = Complex{s * ny, -s * nx};
    u(1, 1) = c;
    return u;
}

double PulseScheduleEntry::model_time(double duration) const {
    if (idle) return 0.0;
    return rabi_rate * duration / (2.0 * gap);
}

PulseScheduleEntry pulse_entry(double g_f, double k, double pulse_constant, int n_durations) {
    if (!(pulse_constant > 0.0) || !std::isfinite(pulse_constant))
        throw InvalidArgument("pulse constant C must be a finite positive number");
    if (n_durations < 2) throw InvalidArgument("pulse schedule needs n_T >= 2");
    const BlochVector d_f = bloch_vector(g_f, k);
    PulseScheduleEntry entry;
    entry.k = k;
    if (is_gapless(d_f)) {
        entry.idle = true;
        return entry;
    }
    entry.gap = d_f.norm();
    // atan2 keeps the quadrant when d_x < 0, which arcsin of d_y/|d| would fold away.
    entry.axis_angle = std::atan2(d_f.y, d_f.x);
    entry.rabi_rate = pulse_constant * entry.gap;
    entry.durations = linspace(0.0, 2.0 * kPi / entry.rabi_rate, n_durations);
    return entry;
}

std::vector<PulseScheduleEntry> pulse_schedule(const QuenchSpec& spec, double pulse_constant,
                                               int n_durations) {
    std::vector<PulseScheduleEntry> schedule;
    for (double k : momentum_grid(spec))
        schedule.push_back(pulse_entry(spec.g_f, k, pulse_constant, n_durations));
    return schedule;
}

ModeEnsemble build_ensemble(const QuenchSpec& spec) {
    ModeEnsemble ensemble;
    ensemble.spec = spec;
    const double s = sign_factor(spec.sign);
    for (double k : momentum_grid(spec)) {
        Mode mode;
        mode.k = k;
        mode.d_i = bloch_vector(spec.g_i, k);
        mode.d_f = bloch_vector(spec.g_f, k);
        if (spec.g_i == 0.0 && spec.sign == SignConvention::ferro_ground) {
            // d_i = (1, 0, 0): the frame is already the sigma_x eigenbasis.
            mode.psi0 = QubitState::plus_x();
            mode.h_f = scaled(mode.d_f, s);
        } else {
            const Unitary2 u = frame_transform(spec.g_i, k, spec.sign);
            mode.psi0 = u * ground_state(scaled(mode.d_i, s));
            mode.h_f = conjugate_vector(u, scaled(mode.d_f, s));
        }
        ensemble.modes.push_back(mode);
    }
    return ensemble;
}

}  // namespace dqpt
