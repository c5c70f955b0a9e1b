#include "qmix/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qmix {

namespace {
constexpr double kIngestTol = 1e-9;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

double mems_g(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("mems: x must lie in [0,1], got " + std::to_string(x));
    return x <= 2.0 / 3.0 ? 1.0 / 3.0 : x / 2.0;
}

MemsParam MemsParam::from_x(double x) { return {x, mems_g(x)}; }

DensityMatrix4 mems(double x) {
    const double g = mems_g(x);
    Mat4 m;
    m(0, 0) = g;
    m(1, 1) = 1.0 - 2.0 * g;
    m(3, 3) = g;
    m(0, 3) = x / 2.0;
    m(3, 0) = x / 2.0;
    return {m};
}

double mems_x_from_R(double R) {
    if (!(R >= 1.0 - 1e-12 && R <= 3.0 + 1e-12))
        throw std::invalid_argument("mems_from_R: R must lie in [1,3], got " + std::to_string(R));
    R = std::clamp(R, 1.0, 3.0);
    if (R <= 1.8) return 0.5 * (1.0 + std::sqrt(2.0 / R - 1.0));
    return std::sqrt(2.0 * (1.0 / R - 1.0 / 3.0));
}

DensityMatrix4 mems_from_R(double R) { return mems(mems_x_from_R(R)); }

Spectrum4 Spectrum4::from_sorted(const std::array<double, 4>& p) {
    for (std::size_t i = 0; i + 1 < 4; ++i)
        if (p[i] < p[i + 1] - 1e-12)
            throw std::invalid_argument("Spectrum4: probabilities must be sorted descending");
    if (p[3] < -1e-12) throw std::invalid_argument("Spectrum4: negative probability");
    const double sum = p[0] + p[1] + p[2] + p[3];
    if (std::abs(sum - 1.0) > kIngestTol)
        throw std::invalid_argument("Spectrum4: probabilities sum to " + std::to_string(sum));
    Spectrum4 s;
    for (std::size_t i = 0; i < 4; ++i) s.p[i] = std::max(p[i], 0.0) / sum;
    return s;
}

Spectrum4 Spectrum4::sorted_from(std::array<double, 4> p) {
    std::sort(p.begin(), p.end(), std::greater<double>());
    return from_sorted(p);
}

DensityMatrix4 ih_state(const Spectrum4& p) {
    const auto& q = p.p;
    Mat4 m;
    m(0, 0) = q[1];
    m(1, 1) = 0.5 * (q[2] + q[0]);
    m(2, 2) = 0.5 * (q[2] + q[0]);
    m(1, 2) = 0.5 * (q[2] - q[0]);
    m(2, 1) = 0.5 * (q[2] - q[0]);
    m(3, 3) = q[3];
    return {m};
}

std::array<cplx, 4> bell_state(int k) {
    switch (k) {
        case 0: return {kInvSqrt2, 0.0, 0.0, kInvSqrt2};    // |Phi+>
        case 1: return {kInvSqrt2, 0.0, 0.0, -kInvSqrt2};   // |Phi->
        case 2: return {0.0, kInvSqrt2, kInvSqrt2, 0.0};    // |Psi+>
        case 3: return {0.0, kInvSqrt2, -kInvSqrt2, 0.0};   // |Psi->
        default: throw std::invalid_argument("bell_state: index must be 0..3");
    }
}

DensityMatrix4 bell_diagonal(const std::array<double, 4>& w) {
    double sum = 0.0;
    for (double v : w) {
        if (v < -1e-12) throw std::invalid_argument("bell_diagonal: negative weight");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kIngestTol)
        throw std::invalid_argument("bell_diagonal: weights sum to " + std::to_string(sum));
    Mat4 m;
    for (int k = 0; k < 4; ++k) {
        const auto b = bell_state(k);
        const double wk = std::max(w[k], 0.0) / sum;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) m(i, j) += wk * b[i] * std::conj(b[j]);
    }
    return {m};
}

Mat4 magic_basis() {
    const cplx i{0.0, 1.0};
    const std::array<cplx, 4> phase = {1.0, i, i, 1.0};
    Mat4 m;
    for (int k = 0; k < 4; ++k) {
        const auto b = bell_state(k);
        for (std::size_t r = 0; r < 4; ++r) m(r, k) = phase[k] * b[r];
    }
    return m;
}

}  // namespace qmix
