#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dqpt/chain.hpp"
#include "dqpt/echo.hpp"
#include "dqpt/errors.hpp"
#include "oracles.hpp"

using namespace dqpt;
using dqpt::oracle::Rng;

namespace {

// Dense H assembled from Kronecker products; site i is the i-th least significant factor.
Eigen::MatrixXcd kron_hamiltonian(int n, double g, const std::vector<std::pair<int, int>>& bonds) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd sx = oracle::pauli_eigen(1, 0, 0);
    const Eigen::Matrix2cd sz = oracle::pauli_eigen(0, 0, 1);
    auto site_product = [&](const std::vector<int>& sites, const Eigen::Matrix2cd& op) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
        for (int i = n - 1; i >= 0; --i) {
            const bool hit = std::find(sites.begin(), sites.end(), i) != sites.end();
            const Eigen::Matrix2cd& f = hit ? op : id;
            Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    next.block(r * m.rows(), c * m.cols(), m.rows(), m.cols()) = f(r, c) * m;
            m = next;
        }
        return m;
    };
    const auto dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [i, j] : bonds) h -= site_product({i, j}, sx);
    for (int i = 0; i < n; ++i) h -= g * site_product({i}, sz);
    return h;
}

Eigen::VectorXcd to_vec(const ChainState& s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.amp.data(), static_cast<Eigen::Index>(s.amp.size()));
}

ChainState random_state(Rng& rng, int n) {
    ChainState s{n, std::vector<Complex>(std::size_t{1} << n)};
    for (auto& a : s.amp) a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double norm = std::sqrt(s.norm_squared());
    for (auto& a : s.amp) a /= norm;
    return s;
}

Eigen::VectorXcd expm_apply(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& v, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd c = es.eigenvectors().adjoint() * v;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -es.eigenvalues()(i) * t);
    return es.eigenvectors() * c;
}

QuenchSpec abc_spec(double g_f, int n) {
    QuenchSpec s;
    s.g_f = g_f;
    s.n_spins = n;
    s.grid = GridMode::abc;
    return s;
}

}  // namespace

TEST(ChainState, InitialStates) {
    const ChainState one = initial_chain_state(1);
    ASSERT_EQ(one.amp.size(), 2u);
    EXPECT_NEAR(one.amp[0].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(one.amp[1].real(), 1 / std::sqrt(2.0), 1e-15);
    for (const auto& a : initial_chain_state(2).amp) EXPECT_NEAR(a.real(), 0.5, 1e-15);
    const ChainState eight = initial_chain_state(8);
    EXPECT_NEAR(eight.norm_squared(), 1.0, 1e-14);
    EXPECT_NEAR(expectation(ChainOperator(8, 0.0, Boundary::periodic), eight).real(), -8.0, 1e-12);
    EXPECT_NEAR(expectation(ChainOperator(8, 0.0, Boundary::open), eight).real(), -7.0, 1e-12);
    EXPECT_NEAR(magnetization_x(eight), 0.5, 1e-14);
    EXPECT_NEAR(even_parity_state(6).norm_squared(), 1.0, 1e-14);
    EXPECT_NEAR(std::norm(overlap(even_parity_state(6), initial_chain_state(6))), 0.5, 1e-14);
}

TEST(ChainState, ResourceGuard) {
    EXPECT_THROW(initial_chain_state(15), ResourceGuardError);
    EXPECT_THROW(initial_chain_state(0), ResourceGuardError);
    EXPECT_THROW(ChainOperator(15, 1.0, Boundary::periodic), ResourceGuardError);
    EXPECT_THROW(ChainOperator(4, 1.0, std::vector<std::pair<int, int>>{{0, 4}}), InvalidArgument);
}

TEST(ChainOperator, MatchesKroneckerConstruction) {
    Rng rng(61);
    for (auto bc : {Boundary::periodic, Boundary::open}) {
        const double g = rng.uniform(-2, 2);
        const ChainOperator op(5, g, bc);
        const Eigen::MatrixXcd h = kron_hamiltonian(5, g, op.bonds());
        for (int trial = 0; trial < 5; ++trial) {
            const ChainState v = random_state(rng, 5);
            EXPECT_LT((to_vec(op.apply(v)) - h * to_vec(v)).norm(), 1e-12);
        }
    }
}

TEST(ChainOperator, Hermitian) {
    Rng rng(67);
    const ChainOperator op(7, 0.83, Boundary::periodic);
    for (int trial = 0; trial < 10; ++trial) {
        const ChainState a = random_state(rng, 7);
        const ChainState b = random_state(rng, 7);
        EXPECT_LT(std::abs(overlap(a, op.apply(b)) - std::conj(overlap(b, op.apply(a)))), 1e-12);
    }
}

TEST(ChainEvolver, ZeroFieldPhase) {
    const ChainState plus = initial_chain_state(6);
    for (double t : {0.3, 2.0, -1.5}) {
        const ChainState out = evolve_chain(plus, ChainOperator(6, 0.0, Boundary::periodic), t);
        EXPECT_LT(std::abs(overlap(plus, out) - std::polar(1.0, 6.0 * t)), 1e-12);
    }
}

TEST(ChainEvolver, DenseAndChebyshevAgreeWithOracle) {
    Rng rng(71);
    const ChainOperator op(8, 1.2, Boundary::periodic);
    const Eigen::MatrixXcd h = kron_hamiltonian(8, 1.2, op.bonds());
    const ChainEvolver dense(op, EvolutionMethod::dense);
    const ChainEvolver cheb(op, EvolutionMethod::chebyshev);
    const ChainState psi = random_state(rng, 8);
    for (double t : {1.0, -0.4, 7.3}) {
        const Eigen::VectorXcd expect = expm_apply(h, to_vec(psi), t);
        const ChainState a = dense.evolve(psi, t);
        const ChainState b = cheb.evolve(psi, t);
        EXPECT_LT((to_vec(a) - expect).norm(), 1e-9) << t;
        EXPECT_LT((to_vec(b) - expect).norm(), 1e-9) << t;
        EXPECT_NEAR(a.norm_squared(), 1.0, 1e-10);
        EXPECT_NEAR(b.norm_squared(), 1.0, 1e-10);
    }
}

TEST(ChainEvolver, LargeChainChebyshev) {
    const ChainOperator op(12, 1.2, Boundary::periodic);
    const ChainEvolver evolver(op);
    EXPECT_EQ(evolver.method(), EvolutionMethod::chebyshev);
    const ChainState psi = initial_chain_state(12);
    const ChainState out = evolver.evolve(psi, 2.5);
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-10);
    EXPECT_NEAR(expectation(op, out).real(), expectation(op, psi).real(), 1e-9);
    const ChainState back = evolver.evolve(out, -2.5);
    EXPECT_NEAR(std::norm(overlap(psi, back)), 1.0, 1e-10);
}

TEST(ChainQuench, TranslationAndReflectionInvariance) {
    const int n = 8;
    std::vector<std::pair<int, int>> shifted, mirrored;
    for (int i = 0; i < n; ++i) {
        shifted.emplace_back((i + 3) % n, (i + 4) % n);
        mirrored.emplace_back(n - 1 - i, (2 * n - 2 - i) % n);
    }
    const ChainState plus = initial_chain_state(n);
    const ChainEvolver ring(ChainOperator(n, 1.2, Boundary::periodic));
    const ChainEvolver a(ChainOperator(n, 1.2, shifted));
    const ChainEvolver b(ChainOperator(n, 1.2, mirrored));
    for (double t : {0.5, 1.3, 2.4}) {
        const double p = std::norm(overlap(plus, ring.evolve(plus, t)));
        EXPECT_NEAR(std::norm(overlap(plus, a.evolve(plus, t))), p, 1e-12);
        EXPECT_NEAR(std::norm(overlap(plus, b.evolve(plus, t))), p, 1e-12);
    }
}

TEST(ChainQuench, TrivialRateCases) {
    for (double t : {0.0, 1.0, 4.0}) EXPECT_NEAR(rate_function_ed(6, 0.0, 0.0, t).rate, 0.0, 1e-12);
    EXPECT_NEAR(rate_function_ed(6, 0.0, 1.2, 0.0).rate, 0.0, 1e-14);
    EXPECT_GT(rate_function_ed(6, 0.0, 1.2, 1.0).rate, 0.0);
    EXPECT_THROW(rate_function_ed(6, 0.5, 1.2, 1.0), InvalidArgument);
}

TEST(ChainQuench, EchoTrivialCases) {
    for (double t : {0.0, 1.1, 3.0}) {
        const auto e = echo_chain(6, 1.2, t, 0.0);
        EXPECT_NEAR(e.fidelity, 1.0, 1e-10);
        EXPECT_NEAR(e.magnetization, 0.5, 1e-10);
    }
    // |+>^N is an S_x eigenstate, so the rotation alone is a phase.
    for (double phi : {0.4, 2.0, 5.5}) EXPECT_NEAR(echo_chain(6, 1.2, 0.0, phi).fidelity, 1.0, 1e-12);
}

TEST(ChainQuench, MqcSpectrum) {
    const MqcSpectrum s = mqc_spectrum_ed(6, 1.2, 1.0, Boundary::periodic, 6, 64);
    EXPECT_NEAR(s.sum().real(), 1.0, 1e-10);
    EXPECT_NEAR(s.sum().imag(), 0.0, 1e-10);
    EXPECT_GT(std::abs(s.at(2)), 1e-6);  // many-body coherences beyond first order
    const auto scan = ChainQuench(6, 1.2, Boundary::periodic).fidelity_scan(1.0, 64);
    const auto phis = phi_grid(64);
    for (int j = 0; j < 64; j += 7) EXPECT_NEAR(s.reconstruct(phis[j]).real(), scan[j], 1e-10);

    const MqcSpectrum flat = mqc_spectrum_ed(6, 0.0, 2.0, Boundary::periodic, 6, 64);
    EXPECT_NEAR(flat.at(0).real(), 1.0, 1e-10);
    for (int m = 1; m <= 6; ++m) EXPECT_LT(std::abs(flat.at(m)), 1e-10);

    EXPECT_THROW(mqc_spectrum_ed(6, 1.2, 1.0, Boundary::periodic, 2, 12), AliasingError);
}

TEST(SectorMatchedOracle, RateEqualsMomentumProduct) {
    for (int n : {4, 6, 8}) {
        const SectorMatchedOracle chain(n, 1.2);
        const LoschmidtTable table = loschmidt_table(abc_spec(1.2, n));
        for (double tau : {0.3, 1.0, 2.37, 4.1, 7.0})
            EXPECT_NEAR(chain.rate_function(tau).rate, rate_function(table, tau).rate, 1e-10)
                << "N=" << n << " tau=" << tau;
    }
}

TEST(SectorMatchedOracle, EchoEqualsMomentumProductAndMean) {
    const std::vector<double> taus = {0.0, 0.7, 1.9, 3.2};
    for (int n : {4, 6, 8}) {
        const SectorMatchedOracle chain(n, 1.5);
        EchoConfig c;
        c.spec = abc_spec(1.5, n);
        c.n_phi = 16;
        c.times = taus;
        c.aggregation = Aggregation::product;
        const Surface f = fidelity_otoc(c);
        c.aggregation = Aggregation::mean;
        const Surface m = magnetization_otoc(c);
        for (std::size_t i = 0; i < f.phi.size(); ++i)
            for (std::size_t j = 0; j < taus.size(); ++j) {
                const auto e = chain.echo(taus[j], f.phi[i]);
                EXPECT_NEAR(e.fidelity, f.at(i, j), 1e-10);
                EXPECT_NEAR(e.magnetization, m.at(i, j), 1e-10);
            }
    }
}

TEST(SectorMatchedOracle, Preconditions) {
    EXPECT_THROW(SectorMatchedOracle(5, 1.2), InvalidArgument);
    EXPECT_THROW(SectorMatchedOracle(2, 1.2), InvalidArgument);
    EXPECT_NO_THROW(SectorMatchedOracle(4, 1.2));
}

TEST(Boundary, Parse) {
    EXPECT_EQ(parse_boundary("open"), Boundary::open);
    EXPECT_EQ(to_string(Boundary::periodic), "periodic");
    EXPECT_THROW(parse_boundary("twisted"), InvalidArgument);
}
