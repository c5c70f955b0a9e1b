#pragma once

// Scalar functionals of a two-qubit state: concurrence and entanglement of
// formation, participation ratio, Renyi/Tsallis q-entropies with their
// conditional variants, fully entangled fraction, the PPT separability test
// and the lower envelope of IH-class concurrence at fixed mixedness.

#include <limits>
#include <span>
#include <vector>

#include "qmix/density.hpp"
#include "qmix/states.hpp"

namespace qmix {

// symbolic q values: q = 1 is the von Neumann limit, q = inf the
// max-entropy limit (computed from exact limit formulas, never numerically)
inline constexpr double kQ1 = 1.0;
inline constexpr double kQInf = std::numeric_limits<double>::infinity();

// C above this counts as entangled; conditional entropies above -kClassicalSlack
// count as nonnegative. Pinned so bin statistics are reproducible.
inline constexpr double kEntangledThreshold = 1e-12;
inline constexpr double kClassicalSlack = 1e-12;

struct EntropyParams {
    double q = 2.0;
    double base = 2.0;  // logarithm base for reported Renyi / von Neumann values
};

// Round-off of an exact zero in a unit-trace spectrum; p^q for q < 1 (and
// sqrt in the concurrence) would inflate such noise to ~1e-8, so values
// below the floor are treated as exact zeros.
inline constexpr double kSpectrumNoiseFloor = 1e-14;

// Entropy convention for spectra coming out of the eigensolver: values in
// [-kPsdSlack, kSpectrumNoiseFloor) clip to zero and the sum renormalizes
// to 1; anything more negative is a validation error. 0^q = 0 and
// 0*log 0 = 0 throughout.
std::array<double, 4> clipped_spectrum(const std::array<double, 4>& v);
std::array<double, 2> clipped_spectrum(const std::array<double, 2>& v);

double renyi_entropy(std::span<const double> probs, const EntropyParams& params);
double tsallis_entropy(std::span<const double> probs, double q);

// the monotone map connecting the two families at fixed q != 1:
// tsallis = (e^{(1-q) renyi_nats} - 1)/(1 - q)
double tsallis_from_renyi(double renyi_nats, double q);

// conditioned_on = B computes S_q(A|B), conditioned_on = A computes S_q(B|A).
double conditional_tsallis(const DensityMatrix4& rho, double q, Subsystem conditioned_on);
double conditional_renyi(const DensityMatrix4& rho, const EntropyParams& params,
                         Subsystem conditioned_on);

// true iff the Renyi conditional entropies in both directions are
// nonnegative (within kClassicalSlack) for every q in qset
bool classical_inequalities_hold(const DensityMatrix4& rho, std::span<const double> qset);

struct ConcurrenceDetail {
    std::array<double, 4> lambdas{};  // descending square roots of spec(rho * rho~)
    double C = 0.0;
};

ConcurrenceDetail concurrence(const DensityMatrix4& rho);

// closed form for IH states: max(0, p1 - p3 - 2 sqrt(p2 p4))
double concurrence_ih(const Spectrum4& p);

double entanglement_of_formation(double concurrence);

// 1/Tr(rho^2), evaluated from the matrix entries directly
double participation_ratio(const DensityMatrix4& rho);
double linear_entropy(const DensityMatrix4& rho);  // 1 - Tr(rho^2)

// max over maximally entangled |Phi> of <Phi|rho|Phi>; the largest
// eigenvalue of the real part of rho in the magic basis
double fully_entangled_fraction(const DensityMatrix4& rho);

// positive partial transpose; exactly separability for two qubits
bool is_ppt(const DensityMatrix4& rho);

// smallest concurrence an IH state of participation ratio R in [1,3] can
// carry: (sqrt(3R(4-R)) - R)/(2R)
double ih_min_concurrence(double R);

struct TsallisPair {
    double q = 0.0;
    double ab = 0.0;  // S_q(A|B)
    double ba = 0.0;  // S_q(B|A)
};

struct MeasureRecord {
    double C = 0.0;
    double E = 0.0;
    double R = 1.0;
    double lambda_max = 1.0;
    double SL = 0.0;
    double cond_renyi_inf_AB = 0.0;
    double cond_renyi_inf_BA = 0.0;
    std::vector<TsallisPair> cond_tsallis;  // finite q entries of qset
    double F_EF = 0.0;
    bool entangled = false;
    bool classical_ineq_hold = true;
};

// One-pass bundle: a single eigendecomposition of rho and of each reduced
// state feeds every entropic quantity.
MeasureRecord measure_record(const DensityMatrix4& rho, std::span<const double> qset,
                             double base = 2.0);

}  // namespace qmix
