#pragma once

// Named two-qubit state families. MEMS carry the largest concurrence
// attainable at a fixed participation ratio R; the IH states carry the
// largest concurrence attainable from a fixed spectrum by unitaries. The
// MEMS mixing weight g(x) switches branch at x = 2/3, i.e. at R = 1.8.

#include <array>

#include "qmix/density.hpp"

namespace qmix {

// off-diagonal amplitude x (equal to the family's concurrence) plus the
// derived piecewise weight g(x)
struct MemsParam {
    double x = 0.0;
    double g = 0.0;
    static MemsParam from_x(double x);
};

// g(x) = 1/3 on [0, 2/3], x/2 on [2/3, 1]; both branches meet at x = 2/3
double mems_g(double x);

// diag(g, 1-2g, 0, g) with corners (0,3),(3,0) = x/2
DensityMatrix4 mems(double x);

// Inverts the x <-> R map. R in [1, 1.8] solves x^2 + (1-x)^2 = 1/R on
// [2/3, 1]; R in [1.8, 3] gives x = sqrt(2(1/R - 1/3)). Closed form, no
// iteration.
double mems_x_from_R(double R);
DensityMatrix4 mems_from_R(double R);

// descending probability 4-vector
struct Spectrum4 {
    std::array<double, 4> p{};

    // requires p sorted descending, nonnegative, sum 1 (renormalized within
    // a 1e-9 ingestion tolerance)
    static Spectrum4 from_sorted(const std::array<double, 4>& p);
    // sorts first; used by the random sampler
    static Spectrum4 sorted_from(std::array<double, 4> p);
};

// diag(p2, (p3+p1)/2, (p3+p1)/2, p4) with inner off-diagonals (p3-p1)/2;
// its eigenvalues are exactly the p_i
DensityMatrix4 ih_state(const Spectrum4& p);

// Bell basis order: |Phi+>, |Phi->, |Psi+>, |Psi->
DensityMatrix4 bell_diagonal(const std::array<double, 4>& w);
std::array<cplx, 4> bell_state(int k);

// Unitary whose columns are Bell states with phases chosen so that every
// maximally entangled pure state is a real unit vector in this basis:
// |Phi+>, i|Phi->, i|Psi+>, |Psi->.
Mat4 magic_basis();

}  // namespace qmix
