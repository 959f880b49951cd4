#pragma once

// Time-reversal echo: forward evolution, R_x(phi), evolution under the
// sign-inverted Hamiltonian, then fidelity / magnetization readout and their
// multiple-quantum Fourier spectra.

#include <span>
#include <string>
#include <vector>

#include "dqpt/quench.hpp"
#include "dqpt/su2.hpp"

namespace dqpt {

enum class Aggregation { mean, product };

// absolute: every mode evolves for the same t.
// normalized: times are in units of t0(k) = pi / |d_f(k)|, one clock per mode.
enum class TimeAxis { absolute, normalized };

enum class Observable { fidelity, magnetization };

std::string to_string(Aggregation a);
std::string to_string(TimeAxis a);
Aggregation parse_aggregation(const std::string& text);
TimeAxis parse_time_axis(const std::string& text);

std::vector<double> phi_grid(int n_phi);

struct EchoConfig {
    QuenchSpec spec;
    int n_phi = 64;
    std::vector<double> times;
    Aggregation aggregation = Aggregation::mean;
    TimeAxis time_axis = TimeAxis::absolute;

    void validate(int m_max = 1) const;
};

// Row-major over (phi, t).
struct Surface {
    std::vector<double> phi;
    std::vector<double> t;
    std::vector<double> values;

    double at(std::size_t i_phi, std::size_t i_t) const { return values[i_phi * t.size() + i_t]; }
    double& at(std::size_t i_phi, std::size_t i_t) { return values[i_phi * t.size() + i_t]; }
    std::vector<double> column(std::size_t i_t) const;
};

/// Model time a mode evolves for, given a grid time on the configured axis.
double mode_time(const Mode& mode, double t, TimeAxis axis);

QubitState echo_state(const Mode& mode, double t, double phi);

Surface fidelity_otoc(const EchoConfig& config);
/// Mean over modes of <S_x>. Throws ConfigError for product aggregation.
Surface magnetization_otoc(const EchoConfig& config);

class MqcSpectrum {
public:
    MqcSpectrum() = default;
    MqcSpectrum(int m_max, std::vector<Complex> components);

    int m_max() const { return m_max_; }
    Complex at(int m) const;
    Complex reconstruct(double phi) const;
    Complex sum() const;

private:
    int m_max_ = 0;
    std::vector<Complex> components_;  // index m + m_max
};

/// component(m) = (1/N_phi) sum_j signal_j e^{-i m phi_j}, phi_j = 2 pi j / N_phi.
MqcSpectrum mqc_spectrum(std::span<const double> signal, int m_max);

std::vector<MqcSpectrum> spectrum_dynamics(const EchoConfig& config, Observable observable,
                                           int m_max);

enum class HeisenbergConvention {
    paper,         // W(t) = e^{-iHt} W e^{+iHt}
    conventional   // W(t) = e^{+iHt} W e^{-iHt}
};

/// <psi0| W(t)^dag V^dag W(t) V |psi0> for the mode Hamiltonian d . sigma.
Complex otoc_general(const Unitary2& w, const Unitary2& v, const BlochVector& d, double t,
                     const QubitState& psi0,
                     HeisenbergConvention convention = HeisenbergConvention::paper);

enum class WellShape { double_well, single_well };
std::string to_string(WellShape shape);

inline constexpr double kDefaultWellThreshold = 1e-3;

struct WellReport {
    WellShape shape = WellShape::single_well;
    double t_min = 0.0;        // location of the qualifying minimum, if any
    double prominence = 0.0;   // min(left max, right max) - minimum, best found
};

/// Looks for a strict interior local minimum in [t_c - window, t_c + window]
/// whose nearest local maxima on both sides exceed it by at least threshold.
/// Window edges count as one-sided maxima when the series falls away from them.
WellReport double_well_detector(std::span<const double> times, std::span<const double> series,
                                double t_c, double window,
                                double threshold = kDefaultWellThreshold);

struct SignatureOptions {
    int n_phi = 64;
    int n_time = 201;
    double threshold = kDefaultWellThreshold;
};

struct SignatureReport {
    WellReport well;
    std::vector<double> t_over_t0;
    std::vector<double> a1;  // Re A_1 of the mean magnetization on the normalized clock
};

/// A_1 double-well test on the per-mode normalized clock, centred on t / t0 = 1/2
/// with window 1/2.
SignatureReport dqpt_signature(const QuenchSpec& spec, const SignatureOptions& options = {});

}  // namespace dqpt
