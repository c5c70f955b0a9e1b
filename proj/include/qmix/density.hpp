#pragma once

// Validated density-matrix types. A DensityMatrix4 is Hermitian, unit trace
// and positive semidefinite; validate_density is the ingestion gate for
// externally supplied matrices and reports every violated invariant with its
// measured magnitude. States built by the in-library constructors satisfy
// the invariants by construction.

#include <string>

#include "qmix/linalg.hpp"

namespace qmix {

// eigenvalues above -kPsdSlack count as nonnegative; anything below is an
// invalid state, not round-off
inline constexpr double kPsdSlack = 1e-10;

struct DensityMatrix4 {
    Mat4 m;
};

struct QubitDensity {
    Mat2 m;
};

struct DensityCheck {
    double hermiticity_gap = 0.0;
    double trace_gap = 0.0;
    double min_eigenvalue = 0.0;  // of the symmetrized matrix
    bool hermitian_ok = false;
    bool trace_ok = false;
    bool psd_ok = false;

    bool ok() const { return hermitian_ok && trace_ok && psd_ok; }
    std::string report() const;
};

DensityCheck check_density(const Mat4& raw, double tol);

// Throws std::invalid_argument carrying DensityCheck::report() when any
// invariant is violated beyond `tol`. On success the state is canonicalized:
// symmetrized, eigenvalues clipped to [0,1] and the trace renormalized, so
// the returned matrix satisfies the invariants to round-off.
DensityMatrix4 validate_density(const Mat4& raw, double tol = 1e-9);

inline QubitDensity partial_trace(const DensityMatrix4& rho, Subsystem keep) {
    return {partial_trace(rho.m, keep)};
}
inline Mat4 partial_transpose(const DensityMatrix4& rho, Subsystem side) {
    return partial_transpose(rho.m, side);
}
inline Mat4 spin_flip(const DensityMatrix4& rho) { return spin_flip(rho.m); }

}  // namespace qmix
