#pragma once

// Closed-form single-mode (two-level) linear algebra. Conventions: hbar = 1,
// angles in radians, the mode Hamiltonian is h . sigma.

#include <array>
#include <complex>

namespace dqpt {

using Complex = std::complex<double>;

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
    BlochVector operator-() const { return {-x, -y, -z}; }
};

double dot(const BlochVector& a, const BlochVector& b);

struct QubitState {
    std::array<Complex, 2> amp{Complex{1.0, 0.0}, Complex{0.0, 0.0}};

    Complex operator[](std::size_t i) const { return amp[i]; }
    double norm_squared() const;

    static QubitState up() { return {{Complex{1.0, 0.0}, Complex{0.0, 0.0}}}; }
    static QubitState down() { return {{Complex{0.0, 0.0}, Complex{1.0, 0.0}}}; }
    // (|up> + |down>)/sqrt(2), the +1 eigenstate of sigma_x.
    static QubitState plus_x();
};

// Row-major 2x2 complex matrix.
struct Unitary2 {
    std::array<Complex, 4> m{Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}};

    Complex operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }
    Complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }

    static Unitary2 identity() { return {}; }
    Unitary2 adjoint() const;
};

Unitary2 operator*(const Unitary2& a, const Unitary2& b);
Unitary2 operator-(const Unitary2& a, const Unitary2& b);
QubitState operator*(const Unitary2& u, const QubitState& psi);

// d . sigma as a matrix.
Unitary2 pauli_matrix(const BlochVector& d);

// Largest entrywise modulus of a - b.
double max_abs_diff(const Unitary2& a, const Unitary2& b);
// min over global phases theta of max_abs_diff(a, e^{i theta} b).
double max_abs_diff_up_to_phase(const Unitary2& a, const Unitary2& b);
double unitarity_defect(const Unitary2& u);

Complex inner(const QubitState& a, const QubitState& b);

/// exp(-i (d . sigma) t) = cos(|d|t) I - i sin(|d|t) (d/|d|) . sigma.
/// Returns the identity for |d| = 0. Throws InvalidArgument on non-finite input.
Unitary2 evolution_unitary(const BlochVector& d, double t);

/// exp(-i sigma_x phi / 2).
Unitary2 rotation_x(double phi);

/// Eigenvector of d . sigma with eigenvalue -|d|. The first component whose
/// modulus exceeds 1e-14 is made real and positive. Throws GaplessModeError
/// when |d| = 0.
QubitState ground_state(const BlochVector& d);

/// |<a|b>|^2
double fidelity(const QubitState& a, const QubitState& b);

/// <a| sigma_x / 2 |a>
double expect_sx(const QubitState& a);

}  // namespace dqpt
