#include "dqpt/su2.hpp"

#include <algorithm>
#include <cmath>

#include "dqpt/errors.hpp"

namespace dqpt {

namespace {

constexpr Complex kI{0.0, 1.0};

bool finite(const BlochVector& d) {
    return std::isfinite(d.x) && std::isfinite(d.y) && std::isfinite(d.z);
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

double dot(const BlochVector& a, const BlochVector& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

double QubitState::norm_squared() const {
    return std::norm(amp[0]) + std::norm(amp[1]);
}

QubitState QubitState::plus_x() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{Complex{s, 0.0}, Complex{s, 0.0}}};
}

Unitary2 Unitary2::adjoint() const {
    Unitary2 r;
    r(0, 0) = std::conj((*this)(0, 0));
    r(0, 1) = std::conj((*this)(1, 0));
    r(1, 0) = std::conj((*this)(0, 1));
    r(1, 1) = std::conj((*this)(1, 1));
    return r;
}

Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
    Unitary2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

Unitary2 operator-(const Unitary2& a, const Unitary2& b) {
    Unitary2 r;
    for (std::size_t i = 0; i < 4; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
}

QubitState operator*(const Unitary2& u, const QubitState& psi) {
    return {{u(0, 0) * psi[0] + u(0, 1) * psi[1],
             u(1, 0) * psi[0] + u(1, 1) * psi[1]}};
}

Unitary2 pauli_matrix(const BlochVector& d) {
    Unitary2 r;
    r(0, 0) = d.z;
    r(0, 1) = Complex{d.x, -d.y};
    r(1, 0) = Complex{d.x, d.y};
    r(1, 1) = -d.z;
    return r;
}

double max_abs_diff(const Unitary2& a, const Unitary2& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
    return worst;
}

double max_abs_diff_up_to_phase(const Unitary2& a, const Unitary2& b) {
    Complex overlap{0.0, 0.0};
    for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(b.m[i]) * a.m[i];
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
    Unitary2 aligned;
    for (std::size_t i = 0; i < 4; ++i) aligned.m[i] = phase * b.m[i];
    return max_abs_diff(a, aligned);
}

double unitarity_defect(const Unitary2& u) {
    return max_abs_diff(u.adjoint() * u, Unitary2::identity());
}

Complex inner(const QubitState& a, const QubitState& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

Unitary2 evolution_unitary(const BlochVector& d, double t) {
    if (!finite(d) || !std::isfinite(t))
        throw InvalidArgument("evolution_unitary: non-finite Bloch vector or time");
    const double mag = d.norm();
    if (mag == 0.0) return Unitary2::identity();
    const double c = std::cos(mag * t);
    const double s = std::sin(mag * t);
    const BlochVector n{d.x / mag, d.y / mag, d.z / mag};
    Unitary2 u;
    u(0, 0) = Complex{c, -s * n.z};
    u(0, 1) = -kI * s * Complex{n.x, -n.y};
    u(1, 0) = -kI * s * Complex{n.x, n.y};
    u(1, 1) = Complex{c, s * n.z};
    return u;
}

Unitary2 rotation_x(double phi) {
    if (!std::isfinite(phi)) throw InvalidArgument("rotation_x: non-finite angle");
    const double c = std::cos(phi / 2.0);
    const double s = std::sin(phi / 2.0);
    Unitary2 u;
    u(0, 0) = c;
    u(0, 1) = Complex{0.0, -s};
    u(1, 0) = Complex{0.0, -s};
    u(1, 1) = c;
    return u;
}

QubitState ground_state(const BlochVector& d) {
    if (!finite(d)) throw InvalidArgument("ground_state: non-finite Bloch vector");
    const double mag = d.norm();
    if (mag == 0.0) throw GaplessModeError("ground_state: degenerate Hamiltonian |d| = 0", 0.0);

    // Two algebraically equivalent eigenvector forms; take the better conditioned one.
    QubitState v;
    if (mag + d.z >= mag - d.z) {
        v.amp = {-Complex{d.x, -d.y}, Complex{d.z + mag, 0.0}};
    } else {
        v.amp = {Complex{mag - d.z, 0.0}, -Complex{d.x, d.y}};
    }
    const double n = std::sqrt(v.norm_squared());
    v.amp[0] /= n;
    v.amp[1] /= n;

    const int lead = std::abs(v.amp[0]) > 1e-14 ? 0 : 1;
    const double lead_abs = std::abs(v.amp[lead]);
    const Complex phase = std::conj(v.amp[lead]) / lead_abs;
    v.amp[1 - lead] *= phase;
    v.amp[lead] = Complex{lead_abs, 0.0};
    return v;
}

double fidelity(const QubitState& a, const QubitState& b) {
    return std::norm(inner(a, b));
}

double expect_sx(const QubitState& a) {
    return std::real(std::conj(a[0]) * a[1]);
}

}  // namespace dqpt
