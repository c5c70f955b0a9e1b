#pragma once

// Deterministic Monte Carlo sweeps over random two-qubit states, binned by
// participation ratio or by largest eigenvalue, plus the analytic
// cross-checks (concurrence floor identity, pure-limit slope, mixedness-zone
// contours). Sweeps parallelize over fixed-size sample chunks; per-chunk
// streams and commutative bin merges make the result independent of the
// worker count.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qmix/measures.hpp"
#include "qmix/rng.hpp"

namespace qmix {

enum class Ensemble { ZhslAll, IhOnly, MemsGrid };

struct SweepConfig {
    std::uint64_t samples = 1'000'000;
    int bins = 40;
    double range_lo = 1.0;  // binning variable interval (R or lambda_max)
    double range_hi = 3.0;
    std::vector<double> qset = {kQInf};  // classifier grid
    SeedSpec seed{};
    Ensemble ensemble = Ensemble::ZhslAll;
    int workers = 0;                  // 0 = all hardware threads
    std::uint64_t count_floor = 0;    // bins with fewer qualifying states get flagged
    double base = 2.0;
};

struct BinSeries {
    std::vector<double> bin_centers;
    std::vector<std::uint64_t> counts;  // qualifying states per bin
    std::vector<double> max_C;          // NaN marks an empty bin
    std::map<std::string, std::vector<double>> aux;
};

// called on the draining thread in sample order; safe to write to a file
using RecordSink = std::function<void(const MeasureRecord&)>;

struct BandScanResult {
    BinSeries bins;  // aux: min_C_entangled, sinf_nonneg_count
    std::vector<double> mems_concurrence;   // analytic ceiling at bin centers
    std::vector<double> floor_concurrence;  // analytic IH floor at bin centers
};

// Concurrence band vs participation ratio: bins by R over
// [range_lo, range_hi], per-bin extrema of concurrence, with the analytic
// MEMS ceiling and IH floor evaluated at the bin centers.
BandScanResult band_scan_R(const SweepConfig& config, const RecordSink& sink = {});

struct ZoneReport {
    std::uint64_t samples = 0;
    // zones by lambda_max: [1/2,1], [1/3,1/2), [1/4,1/3)
    std::array<std::uint64_t, 3> zone_counts{};
    std::array<std::uint64_t, 3> zone_violations{};
    double max_violation = 0.0;
};

// violation magnitude of the analytic contour constraints at one point;
// zero when (lambda_max, C) sits inside its zone
double zone_violation(double lambda_max, double C);

struct LambdaScanResult {
    BinSeries bins;  // binned on lambda_max; aux: min_C
    ZoneReport zones;
    std::vector<std::array<double, 2>> mems_overlay;  // (lambda_max, C) along x in [0,1]
};

LambdaScanResult band_scan_lambda(const SweepConfig& config, const RecordSink& sink = {});

// Keeps entangled states whose conditional q-entropies are all nonnegative
// and tracks the per-R-bin maximum concurrence. aux: undersampled flags from
// config.count_floor.
BinSeries escre_max_sweep(const SweepConfig& config);

struct FloorCheckPoint {
    double R = 0.0;
    double a = 0.0;           // extremal spectrum (a, (1-a)/3, (1-a)/3, (1-a)/3)
    double concurrence = 0.0;
    double floor = 0.0;
};

struct FloorCheckReport {
    std::vector<FloorCheckPoint> equality_family;
    double max_equality_gap = 0.0;
    std::uint64_t random_checked = 0;   // spectra with R inside [r_lo, r_hi]
    double min_random_gap = 0.0;        // min of C - floor(R) over those
    std::uint64_t outside_checked = 0;  // R beyond r_hi (floor not asserted there)
    double outside_violation_rate = 0.0;
};

// Verifies that the extremal spectrum family sits exactly on the IH
// concurrence floor, and that random IH spectra with R in [r_lo, r_hi] never
// fall below it.
FloorCheckReport concurrence_floor_check(int grid_points, std::uint64_t random_samples,
                                         const SeedSpec& seed, double r_lo = 1.0,
                                         double r_hi = 1.8);

struct SlopeReport {
    double q = 0.0;
    std::vector<double> epsilons;
    std::vector<double> raw_slopes;  // finite differences, bits per unit concurrence
    double extrapolated = 0.0;       // Richardson extrapolation to eps -> 0
    double candidate_q = 0.0;        // -q/((q-1) ln 2)
    double candidate_2q = 0.0;       // -2q/((q-1) ln 2)
    double rel_err_q = 0.0;
    double rel_err_2q = 0.0;
    std::string matched;  // "q", "2q" or "none" at the 2% level
};

// Finite-difference slope of the conditional Renyi entropy along the MEMS
// family at the pure end, compared against both closed-form candidates.
SlopeReport pure_limit_slope(double q, std::span<const double> epsilons);

struct ProfilePoint {
    double x = 0.0;
    double R = 0.0;
    double C = 0.0;
    double cond_renyi_inf_bits = 0.0;
};

// (R, S_inf(A|B)) along the MEMS family; the sign flips at x = 2/3 where
// R = 1.8.
std::vector<ProfilePoint> mems_conditional_profile(std::span<const double> x_grid);

}  // namespace qmix
