#include <gtest/gtest.h>

#include <cstring>

#include "dqpt/errors.hpp"
#include "dqpt/kernels.hpp"
#include "oracles.hpp"

using namespace dqpt;
using dqpt::oracle::Rng;

namespace {

bool bit_identical(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

class KernelThreads : public ::testing::TestWithParam<int> {
protected:
    void SetUp() override { kernels::set_thread_count(GetParam()); }
    void TearDown() override { kernels::set_thread_count(1); }
};

TEST_P(KernelThreads, RateSeriesBitIdentical) {
    QuenchSpec spec;
    spec.g_f = 1.2;
    spec.n_spins = 200;
    const LoschmidtTable table = loschmidt_table(spec);
    const auto times = linspace(0, 8, 517);
    const auto serial = kernels::rate_series(table, times, kernels::Backend::serial);
    const auto parallel = kernels::rate_series(table, times, kernels::Backend::openmp);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t j = 0; j < serial.size(); ++j) {
        EXPECT_EQ(std::memcmp(&serial[j].rate, &parallel[j].rate, sizeof(double)), 0);
        EXPECT_EQ(serial[j].floored_modes, parallel[j].floored_modes);
    }
}

TEST_P(KernelThreads, EchoSurfacesBitIdentical) {
    QuenchSpec spec;
    spec.g_i = 0.3;
    spec.g_f = 1.5;
    spec.n_spins = 24;
    const ModeEnsemble ens = build_ensemble(spec);
    const auto phis = phi_grid(33);
    const auto times = linspace(0, 3, 41);
    for (auto agg : {Aggregation::mean, Aggregation::product})
        for (auto axis : {TimeAxis::absolute, TimeAxis::normalized}) {
            const auto a = kernels::echo_surfaces(ens, phis, times, agg, axis, kernels::Backend::serial);
            const auto b = kernels::echo_surfaces(ens, phis, times, agg, axis, kernels::Backend::openmp);
            EXPECT_TRUE(bit_identical(a.fidelity.values, b.fidelity.values));
            EXPECT_TRUE(bit_identical(a.magnetization.values, b.magnetization.values));
        }
}

TEST_P(KernelThreads, HamiltonianBitIdentical) {
    Rng rng(73);
    const ChainOperator op(11, 0.9, Boundary::periodic);
    std::vector<Complex> in(op.dimension()), a(op.dimension()), b(op.dimension());
    for (auto& v : in) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    kernels::apply_hamiltonian(op, in, a, kernels::Backend::serial);
    kernels::apply_hamiltonian(op, in, b, kernels::Backend::openmp);
    EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(Complex)), 0);
}

INSTANTIATE_TEST_SUITE_P(Threads, KernelThreads, ::testing::Values(1, 2, 4));

TEST(Kernels, SizeAndInputChecks) {
    const ChainOperator op(3, 1.0, Boundary::open);
    std::vector<Complex> in(8), out(4);
    EXPECT_THROW(kernels::apply_hamiltonian(op, in, out), InvalidArgument);
    QuenchSpec spec;
    const auto table = loschmidt_table(spec);
    const std::vector<double> bad = {0.0, std::nan("")};
    EXPECT_THROW(kernels::rate_series(table, bad), InvalidArgument);
}
