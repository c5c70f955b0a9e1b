#include "qmix/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace qmix {

template <std::size_t N>
Matrix<N> haar_unitary(RandomStream& rng) {
    constexpr double inv_sqrt2 = 0.7071067811865476;
    Matrix<N> g;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(i, j) = cplx{re * inv_sqrt2, im * inv_sqrt2};
        }

    // orthogonalize columns; the second pass keeps the unitarity defect at
    // round-off even for poorly conditioned draws
    for (std::size_t j = 0; j < N; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                cplx proj = 0.0;
                for (std::size_t i = 0; i < N; ++i) proj += std::conj(g(i, k)) * g(i, j);
                for (std::size_t i = 0; i < N; ++i) g(i, j) -= proj * g(i, k);
            }
        double norm2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) norm2 += std::norm(g(i, j));
        if (norm2 < 1e-24)
            throw std::runtime_error("haar_unitary: degenerate Gaussian draw");
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < N; ++i) g(i, j) *= inv;
    }
    return g;
}

template Matrix<2> haar_unitary<2>(RandomStream&);
template Matrix<4> haar_unitary<4>(RandomStream&);

std::vector<double> simplex_point(std::size_t dim, RandomStream& rng) {
    if (dim < 2) throw std::invalid_argument("simplex_point: dim must be >= 2");
    std::vector<double> v(dim);
    double sum = 0.0;
    for (double& x : v) {
        x = rng.exponential();
        sum += x;
    }
    for (double& x : v) x /= sum;
    return v;
}

ZhslDraw zhsl_draw(RandomStream& rng) {
    ZhslDraw d;
    const auto w = simplex_point(4, rng);
    for (std::size_t i = 0; i < 4; ++i) d.weights[i] = w[i];
    d.basis = haar_unitary<4>(rng);

    Mat4 rho;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx v = 0.0;
            for (std::size_t k = 0; k < 4; ++k)
                v += d.basis(i, k) * d.weights[k] * std::conj(d.basis(j, k));
            rho(i, j) = v;
        }
    // force exact Hermiticity; the construction leaves only round-off
    for (std::size_t i = 0; i < 4; ++i) {
        rho(i, i) = rho(i, i).real();
        for (std::size_t j = i + 1; j < 4; ++j) {
            const cplx v = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
            rho(i, j) = v;
            rho(j, i) = std::conj(v);
        }
    }
    d.state = DensityMatrix4{rho};
    return d;
}

DensityMatrix4 zhsl_state(RandomStream& rng) { return zhsl_draw(rng).state; }

std::pair<Spectrum4, DensityMatrix4> ih_random(RandomStream& rng) {
    const auto w = simplex_point(4, rng);
    const Spectrum4 s = Spectrum4::sorted_from({w[0], w[1], w[2], w[3]});
    return {s, ih_state(s)};
}

}  // namespace qmix
