#pragma once

// Data-parallel inner loops. Each kernel has a serial reference path and an
// OpenMP path; both produce bit-identical results because every output
// element is computed by the same arithmetic and all reductions run in a
// fixed order inside one work item.

#include <span>
#include <vector>

#include "dqpt/chain.hpp"
#include "dqpt/echo.hpp"
#include "dqpt/quench.hpp"

namespace dqpt::kernels {

enum class Backend { serial, openmp };

// Backend used by the library front-end functions.
Backend default_backend();
void set_thread_count(int threads);

std::vector<RatePoint> rate_series(const LoschmidtTable& table, std::span<const double> times,
                                   Backend backend = default_backend());

struct EchoSurfaces {
    Surface fidelity;
    Surface magnetization;
};

EchoSurfaces echo_surfaces(const ModeEnsemble& ensemble, std::span<const double> phis,
                           std::span<const double> times, Aggregation fidelity_aggregation,
                           TimeAxis axis, Backend backend = default_backend());

void apply_hamiltonian(const ChainOperator& op, std::span<const Complex> in,
                       std::span<Complex> out, Backend backend = default_backend());

}  // namespace dqpt::kernels
