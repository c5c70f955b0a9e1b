#pragma once

// Dense complex linear algebra for the 2x2 and 4x4 matrices a two-qubit
// analysis needs: Hermitian eigensystems, Kronecker products, partial
// trace/transpose and the spin-flip transform. Everything is a value type;
// no operation mutates its input.

#include <array>
#include <complex>
#include <cstddef>

namespace qmix {

using cplx = std::complex<double>;

template <std::size_t N>
struct Matrix {
    static_assert(N == 2 || N == 4, "only qubit-sized matrices are supported");
    static constexpr std::size_t dim = N;

    // row-major entries
    std::array<cplx, N * N> e{};

    cplx& operator()(std::size_t i, std::size_t j) { return e[i * N + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return e[i * N + j]; }

    static Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    Matrix adjoint() const {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
        return m;
    }

    Matrix conjugate() const {
        Matrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e[i] = std::conj(e[i]);
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& v : e) s += std::norm(v);
        return std::sqrt(s);
    }

    // largest |m_ij - conj(m_ji)|; zero for exactly Hermitian matrices
    double hermiticity_gap() const {
        double g = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i; j < N; ++j)
                g = std::max(g, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return g;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        Matrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e[i] = a.e[i] + b.e[i];
        return m;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        Matrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e[i] = a.e[i] - b.e[i];
        return m;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < N; ++j) m(i, j) += aik * b(k, j);
            }
        return m;
    }
    friend Matrix operator*(const cplx& s, const Matrix& a) {
        Matrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e[i] = s * a.e[i];
        return m;
    }
};

using Mat2 = Matrix<2>;
using Mat4 = Matrix<4>;

template <std::size_t N>
double max_abs_diff(const Matrix<N>& a, const Matrix<N>& b) {
    double g = 0.0;
    for (std::size_t i = 0; i < N * N; ++i) g = std::max(g, std::abs(a.e[i] - b.e[i]));
    return g;
}

// Eigenvalues sorted descending; column j of `vectors` belongs to values[j].
// Within a degenerate cluster the eigenvector basis is arbitrary.
template <std::size_t N>
struct EigenSystem {
    std::array<double, N> values{};
    Matrix<N> vectors;
};

// Cyclic complex Jacobi iteration. Inputs must be Hermitian within 1e-9
// (rejected otherwise); the matrix is symmetrized to (H + H^dag)/2 before
// iterating. Converges to off-diagonal Frobenius norm <= 1e-14 (relative to
// the matrix scale) within a 100-sweep cap, past which a numeric error is
// raised.
template <std::size_t N>
EigenSystem<N> hermitian_eigensystem(const Matrix<N>& h);

// Subsystem labels for the |ab> product basis: first ket label = A.
enum class Subsystem { A, B };

// Basis order |00>,|01>,|10>,|11>: index = 2a + b.
Mat4 kron(const Mat2& a, const Mat2& b);
Mat2 partial_trace(const Mat4& rho, Subsystem keep);
Mat4 partial_transpose(const Mat4& rho, Subsystem side);

// rho~ = (sigma_y (x) sigma_y) conj(rho) (sigma_y (x) sigma_y), taken in the
// product basis.
Mat4 spin_flip(const Mat4& rho);

}  // namespace qmix
