#include "dqpt/kernels.hpp"

#include <cmath>

#include "dqpt/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dqpt::kernels {

namespace {

struct EchoPoint {
    double fidelity;
    double magnetization;
};

// Shared by both backends so each output element sees identical arithmetic.
EchoPoint echo_point(const ModeEnsemble& ensemble, double phi, double t,
                     Aggregation aggregation, TimeAxis axis) {
    double fid = aggregation == Aggregation::product ? 1.0 : 0.0;
    double mag = 0.0;
    for (const Mode& mode : ensemble.modes) {
        const QubitState out = echo_state(mode, mode_time(mode, t, axis), phi);
        const double f = fidelity(mode.psi0, out);
        if (aggregation == Aggregation::product)
            fid *= f;
        else
            fid += f;
        mag += expect_sx(out);
    }
    const auto n = static_cast<double>(ensemble.modes.size());
    if (aggregation == Aggregation::mean) fid /= n;
    return {fid, mag / n};
}

Complex hamiltonian_element(const ChainOperator& op, std::span<const Complex> in,
                            std::size_t s) {
    Complex acc = op.diagonal()[s] * in[s];
    for (std::uint32_t mask : op.bond_masks()) acc -= in[s ^ mask];
    return acc;
}

void check_times(std::span<const double> times) {
    for (double t : times)
        if (!std::isfinite(t)) throw InvalidArgument("time grid has a non-finite entry");
}

}  // namespace

Backend default_backend() {
#ifdef _OPENMP
    return Backend::openmp;
#else
    return Backend::serial;
#endif
}

void set_thread_count(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

std::vector<RatePoint> rate_series(const LoschmidtTable& table, std::span<const double> times,
                                   Backend backend) {
    check_times(times);
    std::vector<RatePoint> out(times.size());
    const auto n = static_cast<std::ptrdiff_t>(times.size());
    if (backend == Backend::serial) {
        for (std::ptrdiff_t j = 0; j < n; ++j) out[j] = rate_function(table, times[j]);
        return out;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) out[j] = rate_function(table, times[j]);
    return out;
}

EchoSurfaces echo_surfaces(const ModeEnsemble& ensemble, std::span<const double> phis,
                           std::span<const double> times, Aggregation fidelity_aggregation,
                           TimeAxis axis, Backend backend) {
    check_times(times);
    EchoSurfaces s;
    for (Surface* surface : {&s.fidelity, &s.magnetization}) {
        surface->phi.assign(phis.begin(), phis.end());
        surface->t.assign(times.begin(), times.end());
        surface->values.assign(phis.size() * times.size(), 0.0);
    }
    const auto n_t = static_cast<std::ptrdiff_t>(times.size());
    const auto total = static_cast<std::ptrdiff_t>(phis.size()) * n_t;
    auto fill = [&](std::ptrdiff_t idx) {
        const EchoPoint p = echo_point(ensemble, phis[idx / n_t], times[idx % n_t],
                                       fidelity_aggregation, axis);
        s.fidelity.values[idx] = p.fidelity;
        s.magnetization.values[idx] = p.magnetization;
    };
    if (backend == Backend::serial) {
        for (std::ptrdiff_t idx = 0; idx < total; ++idx) fill(idx);
        return s;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) fill(idx);
    return s;
}

void apply_hamiltonian(const ChainOperator& op, std::span<const Complex> in,
                       std::span<Complex> out, Backend backend) {
    if (in.size() != op.dimension() || out.size() != op.dimension())
        throw InvalidArgument("apply_hamiltonian: vector size does not match 2^N");
    const auto dim = static_cast<std::ptrdiff_t>(op.dimension());
    if (backend == Backend::serial) {
        for (std::ptrdiff_t s = 0; s < dim; ++s)
            out[s] = hamiltonian_element(op, in, static_cast<std::size_t>(s));
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < dim; ++s)
        out[s] = hamiltonian_element(op, in, static_cast<std::size_t>(s));
}

}  // namespace dqpt::kernels
