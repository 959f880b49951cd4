#pragma once

// Momentum-space transverse-field Ising quench. Each quasi-momentum k carries a
// two-level mode with Bloch vector d(g, k) = (1 - g cos k, g sin k, 0); the
// chain energy unit is the Ising coupling J = 1.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dqpt/su2.hpp"

namespace dqpt {

enum class GridMode {
    paper,  // k = 2 pi j / N, j = 0..N (both endpoints, N + 1 modes)
    abc     // k = (2n + 1) pi / N, n = 0..N-1 (anti-periodic momenta)
};

enum class SignConvention {
    ferro_ground,  // mode Hamiltonian -d.sigma: |x> is the g = 0 ground state
    bare           // mode Hamiltonian +d.sigma, used for sign-invariance checks
};

std::string to_string(GridMode mode);
GridMode parse_grid_mode(const std::string& text);

struct QuenchSpec {
    double g_i = 0.0;
    double g_f = 1.2;
    int n_spins = 30;
    GridMode grid = GridMode::paper;
    SignConvention sign = SignConvention::ferro_ground;

    // Throws InvalidArgument unless N >= 2 and both fields are finite.
    void validate() const;
};

std::vector<double> momentum_grid(const QuenchSpec& spec);

BlochVector bloch_vector(double g, double k);

/// Unitary U that maps the ground state of the initial mode Hamiltonian to |x>
/// and its excited state to (|up> - |down>)/sqrt(2), so that
/// U H_0(k) U^dag = -|d_i(k)| sigma_x. Built as U = P S^dag from the two
/// eigenbases. Throws GaplessModeError when |d_i(k)| = 0.
Unitary2 frame_transform(double g_i, double k,
                         SignConvention sign = SignConvention::ferro_ground);

/// Per-mode Loschmidt amplitude cos(|d_f| t) + i (d_i^ . d_f^) sin(|d_f| t).
Complex loschmidt_mode(const QuenchSpec& spec, double k, double t);

// |d| at or below this is treated as a closed gap.
inline constexpr double kGapTolerance = 1e-12;

bool is_gapless(const BlochVector& d);

// Per-mode data the Loschmidt amplitude needs, precomputed once per spec.
struct LoschmidtTable {
    int n_spins = 0;
    std::vector<double> k;
    std::vector<double> gap;      // |d_f(k)|
    std::vector<double> overlap;  // d_i^ . d_f^ (1 for gapless final modes)
    std::vector<double> loss;     // 1 - overlap^2, from |d_i x d_f| so it is exact at no quench

    std::size_t size() const { return k.size(); }
    Complex amplitude(std::size_t mode, double t) const;
    /// |G_k(t)|^2 = 1 - loss sin^2(|d_f| t), clamped to [0, 1].
    double probability(std::size_t mode, double t) const;
};

LoschmidtTable loschmidt_table(const QuenchSpec& spec);

struct RatePoint {
    double t = 0.0;
    double rate = 0.0;
    // Modes whose |G_k|^2 was clamped to the 1e-300 floor.
    int floored_modes = 0;
};

inline constexpr double kProbabilityFloor = 1e-300;

/// -(1/N) sum_k log |G_k(t)|^2 summed in ascending-k order.
RatePoint rate_function(const QuenchSpec& spec, double t);
RatePoint rate_function(const LoschmidtTable& table, double t);

std::optional<double> critical_momentum(double g_i, double g_f);
std::vector<double> critical_times(double g_i, double g_f, int n_max = 3);
bool dqpt_predicate(double g_i, double g_f);

// Default time grid: [0, 3 t_c(0)] with 300 points when a DQPT exists,
// otherwise [0, 10] with 300 points.
std::vector<double> default_time_grid(double g_i, double g_f, int points = 300);
std::vector<double> linspace(double lo, double hi, int points);

// Rows follow momentum_grid(spec); columns are t / t0(k) in [0, 2],
// t0(k) = pi / |d_f(k)|.
struct ReturnProbabilityMap {
    std::vector<double> k;
    std::vector<double> t_over_t0;
    std::vector<std::vector<double>> probability;
};

ReturnProbabilityMap return_probability_map(const QuenchSpec& spec, int n_t);

struct PulseScheduleEntry {
    double k = 0.0;
    double axis_angle = 0.0;  // azimuth of d_f(k) in the xy plane
    double rabi_rate = 0.0;   // C |d_f(k)|
    double gap = 0.0;         // |d_f(k)|
    bool idle = false;        // |d_f(k)| = 0, no rotation
    std::vector<double> durations;

    /// Rotation by angle rabi_rate * T about (cos a, sin a, 0).
    Unitary2 replay(double duration) const;
    /// Model time simulated by a pulse of the given duration.
    double model_time(double duration) const;
};

PulseScheduleEntry pulse_entry(double g_f, double k, double pulse_constant, int n_durations = 100);

std::vector<PulseScheduleEntry> pulse_schedule(const QuenchSpec& spec, double pulse_constant,
                                               int n_durations = 100);

struct Mode {
    double k = 0.0;
    BlochVector d_i;
    BlochVector d_f;
    // Effective post-quench mode Hamiltonian h . sigma in the rotated frame
    // (sign convention and frame transform already applied).
    BlochVector h_f;
    QubitState psi0;
};

struct ModeEnsemble {
    QuenchSpec spec;
    std::vector<Mode> modes;
};

ModeEnsemble build_ensemble(const QuenchSpec& spec);

}  // namespace dqpt
