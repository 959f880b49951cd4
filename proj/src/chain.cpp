#include "dqpt/chain.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "dqpt/errors.hpp"
#include "dqpt/kernels.hpp"

namespace dqpt {

namespace {

constexpr Complex kI{0.0, 1.0};

void guard_sites(int n) {
    if (n < 1 || n > kMaxChainSites)
        throw ResourceGuardError("chain size N = " + std::to_string(n) + " outside 1.." +
                                 std::to_string(kMaxChainSites));
}

std::vector<std::pair<int, int>> ring_bonds(int n, Boundary bc) {
    std::vector<std::pair<int, int>> bonds;
    for (int i = 0; i + 1 < n; ++i) bonds.emplace_back(i, i + 1);
    if (bc == Boundary::periodic && n > 1) bonds.emplace_back(n - 1, 0);
    return bonds;
}

}  // namespace

std::string to_string(Boundary bc) { return bc == Boundary::periodic ? "periodic" : "open"; }

Boundary parse_boundary(const std::string& text) {
    if (text == "periodic") return Boundary::periodic;
    if (text == "open") return Boundary::open;
    throw InvalidArgument("unknown boundary condition '" + text + "' (expected periodic|open)");
}

double ChainState::norm_squared() const {
    double s = 0.0;
    for (const Complex& a : amp) s += std::norm(a);
    return s;
}

Complex overlap(const ChainState& a, const ChainState& b) {
    if (a.amp.size() != b.amp.size()) throw InvalidArgument("overlap: dimension mismatch");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s;
}

ChainOperator::ChainOperator(int n_sites, double g, Boundary bc)
    : ChainOperator(n_sites, g, ring_bonds(n_sites, bc)) {}

ChainOperator::ChainOperator(int n_sites, double g, std::vector<std::pair<int, int>> bonds)
    : n_sites_(n_sites), g_(g), bonds_(std::move(bonds)) {
    guard_sites(n_sites);
    if (!std::isfinite(g)) throw InvalidArgument("ChainOperator: non-finite field");
    for (const auto& [i, j] : bonds_) {
        if (i < 0 || j < 0 || i >= n_sites || j >= n_sites || i == j)
            throw InvalidArgument("ChainOperator: invalid bond");
        masks_.push_back((1u << i) | (1u << j));
    }
    diagonal_.resize(dimension());
    for (std::size_t s = 0; s < dimension(); ++s) {
        const int down = std::popcount(static_cast<std::uint32_t>(s));
        diagonal_[s] = -g_ * static_cast<double>(n_sites_ - 2 * down);
    }
}

double ChainOperator::spectral_bound() const {
    return std::abs(g_) * n_sites_ + static_cast<double>(bonds_.size());
}

ChainState ChainOperator::apply(const ChainState& state) const {
    ChainState out{n_sites_, std::vector<Complex>(dimension())};
    kernels::apply_hamiltonian(*this, state.amp, out.amp);
    return out;
}

ChainState initial_chain_state(int n_sites) {
    guard_sites(n_sites);
    const std::size_t dim = std::size_t{1} << n_sites;
    return {n_sites, std::vector<Complex>(dim, Complex{std::pow(2.0, -0.5 * n_sites), 0.0})};
}

ChainState even_parity_state(int n_sites) {
    guard_sites(n_sites);
    const std::size_t dim = std::size_t{1} << n_sites;
    const double a = std::pow(2.0, 0.5 * (1 - n_sites));
    ChainState state{n_sites, std::vector<Complex>(dim)};
    for (std::size_t s = 0; s < dim; ++s)
        if (std::popcount(static_cast<std::uint32_t>(s)) % 2 == 0) state.amp[s] = a;
    return state;
}

Complex expectation(const ChainOperator& op, const ChainState& state) {
    return overlap(state, op.apply(state));
}

double magnetization_x(const ChainState& state) {
    double total = 0.0;
    for (int i = 0; i < state.n_sites; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t s = 0; s < state.amp.size(); ++s)
            total += std::real(std::conj(state.amp[s]) * state.amp[s ^ bit]);
    }
    return total / (2.0 * state.n_sites);
}

double bond_correlation(const ChainOperator& op, const ChainState& state) {
    double total = 0.0;
    for (std::uint32_t mask : op.bond_masks())
        for (std::size_t s = 0; s < state.amp.size(); ++s)
            total += std::real(std::conj(state.amp[s]) * state.amp[s ^ mask]);
    return total / (2.0 * state.n_sites);
}

ChainState rotate_global_x(const ChainState& state, double phi) {
    const double c = std::cos(0.5 * phi);
    const Complex ms = -kI * std::sin(0.5 * phi);
    ChainState out = state;
    for (int i = 0; i < state.n_sites; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t s = 0; s < out.amp.size(); ++s) {
            if (s & bit) continue;
            const Complex a0 = out.amp[s];
            const Complex a1 = out.amp[s | bit];
            out.amp[s] = c * a0 + ms * a1;
            out.amp[s | bit] = ms * a0 + c * a1;
        }
    }
    return out;
}

ChainState rotate_bonds_xx(const ChainOperator& op, const ChainState& state, double angle) {
    const double c = std::cos(angle);
    const Complex ms = -kI * std::sin(angle);
    ChainState out = state;
    std::vector<Complex> next(out.amp.size());
    for (std::uint32_t mask : op.bond_masks()) {
        for (std::size_t s = 0; s < out.amp.size(); ++s) next[s] = c * out.amp[s] + ms * out.amp[s ^ mask];
        out.amp.swap(next);
    }
    return out;
}

struct ChainEvolver::Dense {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
};

ChainEvolver::ChainEvolver(ChainOperator op, EvolutionMethod method, double tolerance)
    : op_(std::move(op)), method_(method), tolerance_(tolerance) {
    if (method_ == EvolutionMethod::automatic)
        method_ = op_.n_sites() <= kDenseCutoff ? EvolutionMethod::dense : EvolutionMethod::chebyshev;
    if (method_ == EvolutionMethod::dense) {
        const auto dim = static_cast<Eigen::Index>(op_.dimension());
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index s = 0; s < dim; ++s) {
            h(s, s) = op_.diagonal()[static_cast<std::size_t>(s)];
            for (std::uint32_t mask : op_.bond_masks()) h(s ^ mask, s) -= 1.0;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
        if (solver.info() != Eigen::Success)
            throw NumericalFailure("dense eigendecomposition failed", std::numeric_limits<double>::quiet_NaN());
        dense_ = std::make_unique<Dense>(Dense{solver.eigenvalues(), solver.eigenvectors()});
    }
}

ChainEvolver::~ChainEvolver() = default;
ChainEvolver::ChainEvolver(ChainEvolver&&) noexcept = default;
ChainEvolver& ChainEvolver::operator=(ChainEvolver&&) noexcept = default;

ChainState ChainEvolver::evolve(const ChainState& state, double t) const {
    if (state.n_sites != op_.n_sites() || state.amp.size() != op_.dimension())
        throw InvalidArgument("evolve_chain: state does not match operator");
    if (!std::isfinite(t)) throw InvalidArgument("evolve_chain: non-finite time");
    if (t == 0.0) return state;
    if (method_ == EvolutionMethod::chebyshev) return evolve_chebyshev(state, t);

    const auto dim = static_cast<Eigen::Index>(op_.dimension());
    const Eigen::Map<const Eigen::VectorXcd> psi(state.amp.data(), dim);
    Eigen::VectorXcd coeff = dense_->vectors.transpose().cast<Complex>() * psi;
    for (Eigen::Index i = 0; i < dim; ++i) coeff(i) *= std::polar(1.0, -dense_->energies(i) * t);
    const Eigen::VectorXcd out = dense_->vectors.cast<Complex>() * coeff;
    return {state.n_sites, std::vector<Complex>(out.data(), out.data() + dim)};
}

// exp(-iHt) = sum_k c_k T_k(H/a), c_0 = J_0(a t), c_k = 2 (-i)^k J_k(a t).
ChainState ChainEvolver::evolve_chebyshev(const ChainState& state, double t) const {
    const double a = op_.spectral_bound();
    if (a == 0.0) return state;
    // Long times are split into slices so the Bessel series stays short.
    constexpr double kMaxSlice = 25.0;
    const int slices = std::max(1, static_cast<int>(std::ceil(a * std::abs(t) / kMaxSlice)));
    const double dt = t / slices;
    const double x = a * std::abs(dt);
    const Complex step_phase = dt > 0 ? -kI : kI;
    const int max_terms = static_cast<int>(std::ceil(x)) + 200;

    const std::size_t dim = op_.dimension();
    std::vector<Complex> current = state.amp;
    std::vector<Complex> prev(dim), cur(dim), next(dim), hv(dim);
    const double inv_a = 1.0 / a;

    for (int slice = 0; slice < slices; ++slice) {
        std::vector<Complex> acc(dim);
        prev = current;
        const double j0 = std::cyl_bessel_j(0.0, x);
        for (std::size_t i = 0; i < dim; ++i) acc[i] = j0 * prev[i];

        kernels::apply_hamiltonian(op_, prev, hv);
        for (std::size_t i = 0; i < dim; ++i) cur[i] = hv[i] * inv_a;

        Complex phase = step_phase;
        int small_run = 0;
        int k = 1;
        for (; k <= max_terms; ++k) {
            const double jk = std::cyl_bessel_j(static_cast<double>(k), x);
            const Complex ck = 2.0 * phase * jk;
            for (std::size_t i = 0; i < dim; ++i) acc[i] += ck * cur[i];
            if (k > x && std::abs(2.0 * jk) < tolerance_) {
                if (++small_run >= 2) break;
            } else {
                small_run = 0;
            }
            kernels::apply_hamiltonian(op_, cur, hv);
            for (std::size_t i = 0; i < dim; ++i) next[i] = 2.0 * inv_a * hv[i] - prev[i];
            prev.swap(cur);
            cur.swap(next);
            phase *= step_phase;
        }
        if (k > max_terms)
            throw NumericalFailure("Chebyshev expansion did not converge", std::abs(2.0 * std::cyl_bessel_j(static_cast<double>(max_terms), x)));
        current.swap(acc);
    }
    return {state.n_sites, std::move(current)};
}

ChainState evolve_chain(const ChainState& state, const ChainOperator& op, double t,
                        EvolutionMethod method) {
    return ChainEvolver(op, method).evolve(state, t);
}

ChainQuench::ChainQuench(int n_sites, double g_f, Boundary bc, EvolutionMethod method)
    : evolver_(ChainOperator(n_sites, g_f, bc), method), initial_(initial_chain_state(n_sites)) {}

ChainRate ChainQuench::rate_function(double t) const {
    const ChainState evolved = evolver_.evolve(initial_, t);
    double p = std::min(std::norm(overlap(initial_, evolved)), 1.0);
    ChainRate r;
    if (p < kProbabilityFloor) {
        p = kProbabilityFloor;
        r.floored = true;
    }
    r.rate = -std::log(p) / initial_.n_sites;
    return r;
}

EchoObservables ChainQuench::echo(double t, double phi) const {
    const ChainState forward = evolver_.evolve(initial_, t);
    const ChainState back = evolver_.evolve(rotate_global_x(forward, phi), -t);
    return {std::norm(overlap(initial_, back)), magnetization_x(back)};
}

std::vector<double> ChainQuench::fidelity_scan(double t, int n_phi) const {
    const ChainState forward = evolver_.evolve(initial_, t);
    std::vector<double> signal;
    signal.reserve(static_cast<std::size_t>(n_phi));
    for (double phi : phi_grid(n_phi)) {
        const ChainState back = evolver_.evolve(rotate_global_x(forward, phi), -t);
        signal.push_back(std::norm(overlap(initial_, back)));
    }
    return signal;
}

ChainRate rate_function_ed(int n_sites, double g_i, double g_f, double t, Boundary bc) {
    if (g_i != 0.0)
        throw InvalidArgument("rate_function_ed: only g_i = 0 has an exact product initial state");
    return ChainQuench(n_sites, g_f, bc).rate_function(t);
}

EchoObservables echo_chain(int n_sites, double g_f, double t, double phi, Boundary bc) {
    return ChainQuench(n_sites, g_f, bc).echo(t, phi);
}

MqcSpectrum mqc_spectrum_ed(int n_sites, double g_f, double t, Boundary bc, int m_max,
                            int n_phi) {
    if (n_phi < 2 * n_sites + 1)
        throw AliasingError("N_phi = " + std::to_string(n_phi) +
                            " cannot resolve the chain's coherence orders |m| <= N = " +
                            std::to_string(n_sites));
    const auto signal = ChainQuench(n_sites, g_f, bc).fidelity_scan(t, n_phi);
    return mqc_spectrum(signal, m_max);
}

SectorMatchedOracle::SectorMatchedOracle(int n_sites, double g_f, EvolutionMethod method)
    : evolver_(ChainOperator(n_sites, g_f, Boundary::periodic), method),
      initial_(even_parity_state(n_sites)) {
    if (n_sites < 4 || n_sites % 2 != 0)
        throw InvalidArgument("sector-matched oracle needs an even chain with N >= 4");
}

ChainRate SectorMatchedOracle::rate_function(double tau) const {
    const ChainState evolved = evolver_.evolve(initial_, 0.5 * tau);
    double p = std::min(std::norm(overlap(initial_, evolved)), 1.0);
    ChainRate r;
    if (p < kProbabilityFloor) {
        p = kProbabilityFloor;
        r.floored = true;
    }
    r.rate = -2.0 * std::log(p) / initial_.n_sites;
    return r;
}

EchoObservables SectorMatchedOracle::echo(double tau, double phi) const {
    const double t = 0.5 * tau;
    const ChainState forward = evolver_.evolve(initial_, t);
    const ChainState back = evolver_.evolve(rotate_bonds_xx(evolver_.op(), forward, 0.25 * phi), -t);
    const double f = std::norm(overlap(initial_, back));
    return {f * f, bond_correlation(evolver_.op(), back)};
}

}  // namespace dqpt
