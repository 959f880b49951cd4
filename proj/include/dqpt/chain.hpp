#pragma once

// Brute-force state-vector simulation of the full 2^N transverse-field Ising
// chain H = -sum_b sigma^x_i sigma^x_j - g sum_i sigma^z_i. Basis index bit i
// is site i; bit value 0 is spin up (sigma^z = +1).

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "dqpt/echo.hpp"
#include "dqpt/su2.hpp"

namespace dqpt {

enum class Boundary { periodic, open };

std::string to_string(Boundary bc);
Boundary parse_boundary(const std::string& text);

inline constexpr int kMaxChainSites = 14;
inline constexpr int kDenseCutoff = 10;

struct ChainState {
    int n_sites = 0;
    std::vector<Complex> amp;

    double norm_squared() const;
};

Complex overlap(const ChainState& a, const ChainState& b);

class ChainOperator {
public:
    ChainOperator(int n_sites, double g, Boundary bc);
    // Arbitrary bond list, e.g. a relabelled ring.
    ChainOperator(int n_sites, double g, std::vector<std::pair<int, int>> bonds);

    int n_sites() const { return n_sites_; }
    std::size_t dimension() const { return std::size_t{1} << n_sites_; }
    double field() const { return g_; }
    const std::vector<std::pair<int, int>>& bonds() const { return bonds_; }
    const std::vector<std::uint32_t>& bond_masks() const { return masks_; }
    const std::vector<double>& diagonal() const { return diagonal_; }

    // Gershgorin bound on the spectral radius.
    double spectral_bound() const;

    ChainState apply(const ChainState& state) const;

private:
    int n_sites_;
    double g_;
    std::vector<std::pair<int, int>> bonds_;
    std::vector<std::uint32_t> masks_;
    std::vector<double> diagonal_;
};

/// |+>^N, every amplitude 2^{-N/2}. Throws ResourceGuardError outside 1..14.
ChainState initial_chain_state(int n_sites);

/// (|+>^N + |->^N)/sqrt(2): the even fermion-parity component of |+>^N.
ChainState even_parity_state(int n_sites);

Complex expectation(const ChainOperator& op, const ChainState& state);
/// <S_x> / N = (1/2N) sum_i <sigma^x_i>
double magnetization_x(const ChainState& state);
/// (1/2N) sum_b <sigma^x_i sigma^x_j> over the operator's bonds.
double bond_correlation(const ChainOperator& op, const ChainState& state);

/// exp(-i phi S_x), S_x = (1/2) sum_i sigma^x_i.
ChainState rotate_global_x(const ChainState& state, double phi);
/// prod_b exp(-i angle sigma^x_i sigma^x_j).
ChainState rotate_bonds_xx(const ChainOperator& op, const ChainState& state, double angle);

enum class EvolutionMethod { automatic, dense, chebyshev };

class ChainEvolver {
public:
    explicit ChainEvolver(ChainOperator op, EvolutionMethod method = EvolutionMethod::automatic,
                          double tolerance = 1e-12);
    ~ChainEvolver();
    ChainEvolver(ChainEvolver&&) noexcept;
    ChainEvolver& operator=(ChainEvolver&&) noexcept;

    const ChainOperator& op() const { return op_; }
    EvolutionMethod method() const { return method_; }

    /// exp(-i H t) |state>.
    ChainState evolve(const ChainState& state, double t) const;

private:
    ChainState evolve_chebyshev(const ChainState& state, double t) const;

    struct Dense;
    ChainOperator op_;
    EvolutionMethod method_;
    double tolerance_;
    std::unique_ptr<Dense> dense_;
};

ChainState evolve_chain(const ChainState& state, const ChainOperator& op, double t,
                        EvolutionMethod method = EvolutionMethod::automatic);

struct ChainRate {
    double rate = 0.0;
    bool floored = false;
};

struct EchoObservables {
    double fidelity = 0.0;
    double magnetization = 0.0;
};

/// Quench from the g = 0 ground state |+>^N, evaluated by brute force.
class ChainQuench {
public:
    ChainQuench(int n_sites, double g_f, Boundary bc,
                EvolutionMethod method = EvolutionMethod::automatic);

    ChainRate rate_function(double t) const;
    /// e^{+iHt} R_x(phi) e^{-iHt} |+>^N: fidelity with |+>^N and <S_x>/N.
    EchoObservables echo(double t, double phi) const;
    std::vector<double> fidelity_scan(double t, int n_phi) const;

private:
    ChainEvolver evolver_;
    ChainState initial_;
};

ChainRate rate_function_ed(int n_sites, double g_i, double g_f, double t,
                           Boundary bc = Boundary::periodic);
EchoObservables echo_chain(int n_sites, double g_f, double t, double phi,
                           Boundary bc = Boundary::periodic);
MqcSpectrum mqc_spectrum_ed(int n_sites, double g_f, double t, Boundary bc, int m_max,
                            int n_phi = 64);

/// Exact chain counterpart of the momentum-mode construction on the abc grid.
///
/// Only the even-parity state (|+>^N + |->^N)/sqrt(2) lives entirely on the
/// anti-periodic momenta, and there every (k, -k) pair evolves under
/// 2 d(k) . sigma while the mode picture counts k and -k separately with
/// d(k) . sigma. In mode time tau this gives
///   f_mode(tau)   = 2 f_chain(tau / 2)
///   F_mode(tau)   = F_chain(tau / 2)^2          (product aggregation)
///   M_mode(tau)   = (1/2N) sum_b <x_i x_j>      (mean aggregation)
/// where the per-mode R_x(phi) is the bond rotation exp(-i phi/4 sum x_i x_j).
/// Requires even N >= 4 and periodic boundaries.
class SectorMatchedOracle {
public:
    SectorMatchedOracle(int n_sites, double g_f,
                        EvolutionMethod method = EvolutionMethod::automatic);

    ChainRate rate_function(double tau) const;
    EchoObservables echo(double tau, double phi) const;

private:
    ChainEvolver evolver_;
    ChainState initial_;
};

}  // namespace dqpt
