#include "qmix/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qmix {

namespace {

// off-diagonal Frobenius norm, both triangles
template <std::size_t N>
double off_diagonal_norm(const Matrix<N>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p,q). The rotation is the
// product of a phase on column q and a real Givens rotation, so the diagonal
// stays real throughout.
template <std::size_t N>
void rotate(Matrix<N>& a, Matrix<N>& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double m = std::abs(apq);
    if (m == 0.0) return;

    const cplx phase = apq / m;  // e^{i arg(a_pq)}
    const double alpha = a(p, p).real();
    const double beta = a(q, q).real();
    const double tau = (beta - alpha) / (2.0 * m);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // U = [[c, s], [-s*conj(phase), c*conj(phase)]]; apply A <- A*U on
    // columns p,q, then A <- U^dag*A on rows p,q.
    const cplx up = -s * std::conj(phase);
    const cplx uq = c * std::conj(phase);
    for (std::size_t k = 0; k < N; ++k) {
        const cplx akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp + up * akq;
        a(k, q) = s * akp + uq * akq;
    }
    const cplx lp = -s * phase;
    const cplx lq = c * phase;
    for (std::size_t k = 0; k < N; ++k) {
        const cplx apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk + lp * aqk;
        a(q, k) = s * apk + lq * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t k = 0; k < N; ++k) {
        const cplx vkp = v(k, p), vkq = v(k, q);
        v(k, p) = c * vkp + up * vkq;
        v(k, q) = s * vkp + uq * vkq;
    }
}

}  // namespace

template <std::size_t N>
EigenSystem<N> hermitian_eigensystem(const Matrix<N>& h) {
    const double gap = h.hermiticity_gap();
    if (!(gap <= 1e-9))
        throw std::invalid_argument("hermitian_eigensystem: input is not Hermitian (gap " +
                                    std::to_string(gap) + ")");

    Matrix<N> a;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

    Matrix<N> v = Matrix<N>::identity();
    const double tol = 1e-14 * std::max(1.0, a.frobenius_norm());

    bool converged = false;
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (off_diagonal_norm(a) <= tol) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) rotate(a, v, p, q);
    }
    if (!converged && off_diagonal_norm(a) > tol)
        throw std::runtime_error("hermitian_eigensystem: Jacobi iteration did not converge");

    std::array<std::size_t, N> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigenSystem<N> out;
    for (std::size_t j = 0; j < N; ++j) {
        out.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < N; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

template EigenSystem<2> hermitian_eigensystem<2>(const Matrix<2>&);
template EigenSystem<4> hermitian_eigensystem<4>(const Matrix<4>&);

Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l)
                    m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return m;
}

Mat2 partial_trace(const Mat4& rho, Subsystem keep) {
    Mat2 r;
    if (keep == Subsystem::A) {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                r(i, j) = rho(2 * i + 0, 2 * j + 0) + rho(2 * i + 1, 2 * j + 1);
    } else {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                r(i, j) = rho(0 + i, 0 + j) + rho(2 + i, 2 + j);
    }
    return r;
}

Mat4 partial_transpose(const Mat4& rho, Subsystem side) {
    Mat4 m;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t ap = 0; ap < 2; ++ap)
                for (std::size_t bp = 0; bp < 2; ++bp) {
                    if (side == Subsystem::B)
                        m(2 * a + b, 2 * ap + bp) = rho(2 * a + bp, 2 * ap + b);
                    else
                        m(2 * a + b, 2 * ap + bp) = rho(2 * ap + b, 2 * a + bp);
                }
    return m;
}

Mat4 spin_flip(const Mat4& rho) {
    // sigma_y (x) sigma_y is the anti-diagonal matrix with signs (-1,+1,+1,-1)
    // read from entry (0,3); conjugating by it maps index i to 3-i.
    static constexpr double sign[4] = {-1.0, 1.0, 1.0, -1.0};
    Mat4 m;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            m(i, j) = sign[i] * sign[j] * std::conj(rho(3 - i, 3 - j));
    return m;
}

}  // namespace qmix
