#include "qmix/density.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qmix {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string DensityCheck::report() const {
    std::string s;
    if (!hermitian_ok) s += "hermiticity gap " + fmt(hermiticity_gap) + "; ";
    if (!trace_ok) s += "trace gap " + fmt(trace_gap) + "; ";
    if (!psd_ok) s += "most negative eigenvalue " + fmt(min_eigenvalue) + "; ";
    if (s.empty()) return "ok";
    s.erase(s.size() - 2);
    return s;
}

DensityCheck check_density(const Mat4& raw, double tol) {
    DensityCheck c;
    c.hermiticity_gap = raw.hermiticity_gap();
    c.trace_gap = std::abs(raw.trace() - cplx{1.0});

    Mat4 sym;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) sym(i, j) = 0.5 * (raw(i, j) + std::conj(raw(j, i)));
    const auto eig = hermitian_eigensystem(sym);
    c.min_eigenvalue = eig.values[3];

    c.hermitian_ok = c.hermiticity_gap <= tol;
    c.trace_ok = c.trace_gap <= tol;
    c.psd_ok = c.min_eigenvalue >= -std::max(tol, kPsdSlack);
    return c;
}

DensityMatrix4 validate_density(const Mat4& raw, double tol) {
    if (!(tol >= 0.0)) throw std::invalid_argument("validate_density: tolerance must be >= 0");
    const DensityCheck c = check_density(raw, tol);
    if (!c.ok())
        throw std::invalid_argument("density matrix invalid: " + c.report());

    // canonicalize: rebuild from the clipped spectrum of the symmetrized matrix
    Mat4 sym;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) sym(i, j) = 0.5 * (raw(i, j) + std::conj(raw(j, i)));
    const auto eig = hermitian_eigensystem(sym);
    std::array<double, 4> lam{};
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        lam[k] = std::max(eig.values[k], 0.0);
        sum += lam[k];
    }
    Mat4 rho;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx v = 0.0;
            for (std::size_t k = 0; k < 4; ++k)
                v += eig.vectors(i, k) * (lam[k] / sum) * std::conj(eig.vectors(j, k));
            rho(i, j) = v;
        }
    return {rho};
}

}  // namespace qmix
