#pragma once

// Random state generation under the ZHSL product measure: Haar-distributed
// eigenbasis times Lebesgue-uniform eigenvalue simplex. Draw order per state
// is fixed (weights first, then basis) and is part of the reproducibility
// contract.

#include <utility>
#include <vector>

#include "qmix/density.hpp"
#include "qmix/rng.hpp"
#include "qmix/states.hpp"

namespace qmix {

// QR of a complex Gaussian matrix via modified Gram-Schmidt; the triangular
// factor's diagonal comes out real positive, which makes the distribution
// exactly Haar.
template <std::size_t N>
Matrix<N> haar_unitary(RandomStream& rng);

// Lebesgue-uniform point on the probability simplex (normalized unit-rate
// exponentials).
std::vector<double> simplex_point(std::size_t dim, RandomStream& rng);

struct ZhslDraw {
    std::array<double, 4> weights{};  // unsorted simplex point = spectrum of state
    Mat4 basis;                       // Haar unitary; columns are the eigenvectors
    DensityMatrix4 state;
};

ZhslDraw zhsl_draw(RandomStream& rng);
DensityMatrix4 zhsl_state(RandomStream& rng);

// simplex point sorted descending plus the IH state carrying that spectrum
std::pair<Spectrum4, DensityMatrix4> ih_random(RandomStream& rng);

}  // namespace qmix
