#include "qmix/experiments.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qmix/sampler.hpp"

namespace qmix {

namespace {

constexpr std::uint64_t kChunkSamples = 8192;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_workers(int workers, std::uint64_t nchunks) {
    int n = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (static_cast<std::uint64_t>(n) > nchunks) n = static_cast<int>(nchunks);
    return n;
}

// Runs `work` over fixed-size sample chunks on a small thread pool and hands
// the results to `drain` in chunk order on the calling thread. The chunk ->
// stream assignment is fixed, so the outcome does not depend on the worker
// count.
template <class ChunkOut>
void run_chunked(std::uint64_t samples, int workers, const SeedSpec& seed,
                 const std::function<ChunkOut(std::uint64_t first_index, std::uint64_t count,
                                              RandomStream&)>& work,
                 const std::function<void(ChunkOut&&)>& drain) {
    if (samples == 0) return;
    const std::uint64_t nchunks = (samples + kChunkSamples - 1) / kChunkSamples;
    const int nw = resolve_workers(workers, nchunks);

    std::atomic<std::uint64_t> next{0};
    std::map<std::uint64_t, ChunkOut> done;
    std::mutex mu;
    std::condition_variable cv;
    std::exception_ptr error;

    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= nchunks) return;
                const std::uint64_t first = c * kChunkSamples;
                const std::uint64_t count = std::min(kChunkSamples, samples - first);
                try {
                    RandomStream rng = split_stream(seed, c);
                    ChunkOut out = work(first, count, rng);
                    {
                        std::lock_guard lk(mu);
                        done.emplace(c, std::move(out));
                    }
                    cv.notify_all();
                } catch (...) {
                    {
                        std::lock_guard lk(mu);
                        if (!error) error = std::current_exception();
                        next.store(nchunks);
                    }
                    cv.notify_all();
                    return;
                }
            }
        });

    for (std::uint64_t c = 0; c < nchunks; ++c) {
        std::unique_lock lk(mu);
        cv.wait(lk, [&] { return error || done.count(c) != 0; });
        if (error) break;
        ChunkOut out = std::move(done.at(c));
        done.erase(c);
        lk.unlock();
        drain(std::move(out));
    }
    for (auto& t : pool) t.join();
    {
        std::lock_guard lk(mu);
        if (error) std::rethrow_exception(error);
    }
}

void check_config(const SweepConfig& c) {
    if (c.samples < 1) throw std::invalid_argument("sweep: samples must be >= 1");
    if (c.bins < 2) throw std::invalid_argument("sweep: bins must be >= 2");
    if (!(c.range_lo < c.range_hi)) throw std::invalid_argument("sweep: empty range");
}

void check_record(const MeasureRecord& r) {
    const double slack = 1e-9;
    if (!(r.R >= 1.0 - slack && r.R <= 4.0 + slack) || !(r.C >= 0.0 && r.C <= 1.0 + slack) ||
        !(r.E >= 0.0 && r.E <= 1.0 + slack) ||
        !(r.lambda_max >= 0.25 - slack && r.lambda_max <= 1.0 + slack))
        throw std::runtime_error("sweep: measure record violates its invariants");
}

std::vector<double> bin_centers(int bins, double lo, double hi) {
    std::vector<double> c(bins);
    const double w = (hi - lo) / bins;
    for (int i = 0; i < bins; ++i) c[i] = lo + (i + 0.5) * w;
    return c;
}

int bin_of(double v, int bins, double lo, double hi) {
    if (v < lo || v > hi) return -1;
    int i = static_cast<int>((v - lo) / (hi - lo) * bins);
    if (i == bins) i = bins - 1;  // right edge belongs to the last bin
    return i;
}

MeasureRecord draw_record(Ensemble ensemble, const SweepConfig& cfg, RandomStream& rng) {
    switch (ensemble) {
        case Ensemble::ZhslAll:
            return measure_record(zhsl_state(rng), cfg.qset, cfg.base);
        case Ensemble::IhOnly:
            return measure_record(ih_random(rng).second, cfg.qset, cfg.base);
        case Ensemble::MemsGrid:
            return measure_record(mems(rng.uniform()), cfg.qset, cfg.base);
    }
    throw std::logic_error("draw_record: unknown ensemble");
}

struct BandChunk {
    std::vector<std::uint64_t> counts;
    std::vector<double> max_C;
    std::vector<double> min_C_entangled;
    std::vector<double> sinf_nonneg;
    std::vector<MeasureRecord> records;  // only kept when a sink is attached
};

}  // namespace

BandScanResult band_scan_R(const SweepConfig& config, const RecordSink& sink) {
    check_config(config);
    if (config.ensemble == Ensemble::MemsGrid)
        throw std::invalid_argument("band_scan_R: ensemble must be random (zhsl or ih)");

    const int bins = config.bins;
    const bool keep_records = static_cast<bool>(sink);

    auto work = [&](std::uint64_t, std::uint64_t count, RandomStream& rng) {
        BandChunk ch;
        ch.counts.assign(bins, 0);
        ch.max_C.assign(bins, kNaN);
        ch.min_C_entangled.assign(bins, kNaN);
        ch.sinf_nonneg.assign(bins, 0.0);
        if (keep_records) ch.records.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            MeasureRecord r = draw_record(config.ensemble, config, rng);
            check_record(r);
            const int b = bin_of(r.R, bins, config.range_lo, config.range_hi);
            if (b >= 0) {
                ++ch.counts[b];
                if (!(ch.max_C[b] >= r.C)) ch.max_C[b] = r.C;
                if (r.entangled && !(ch.min_C_entangled[b] <= r.C)) ch.min_C_entangled[b] = r.C;
                if (r.cond_renyi_inf_AB >= -kClassicalSlack) ch.sinf_nonneg[b] += 1.0;
            }
            if (keep_records) ch.records.push_back(std::move(r));
        }
        return ch;
    };

    BandScanResult out;
    out.bins.bin_centers = bin_centers(bins, config.range_lo, config.range_hi);
    out.bins.counts.assign(bins, 0);
    out.bins.max_C.assign(bins, kNaN);
    auto& min_c = out.bins.aux["min_C_entangled"];
    auto& nonneg = out.bins.aux["sinf_nonneg_count"];
    min_c.assign(bins, kNaN);
    nonneg.assign(bins, 0.0);

    run_chunked<BandChunk>(config.samples, config.workers, config.seed, work,
                           [&](BandChunk&& ch) {
                               for (int b = 0; b < bins; ++b) {
                                   out.bins.counts[b] += ch.counts[b];
                                   if (!std::isnan(ch.max_C[b]) &&
                                       !(out.bins.max_C[b] >= ch.max_C[b]))
                                       out.bins.max_C[b] = ch.max_C[b];
                                   if (!std::isnan(ch.min_C_entangled[b]) &&
                                       !(min_c[b] <= ch.min_C_entangled[b]))
                                       min_c[b] = ch.min_C_entangled[b];
                                   nonneg[b] += ch.sinf_nonneg[b];
                               }
                               for (const MeasureRecord& r : ch.records) sink(r);
                           });

    out.mems_concurrence.resize(bins);
    out.floor_concurrence.resize(bins);
    for (int b = 0; b < bins; ++b) {
        const double r = out.bins.bin_centers[b];
        const bool in_domain = r >= 1.0 && r <= 3.0;
        out.mems_concurrence[b] = in_domain ? mems_x_from_R(r) : kNaN;
        out.floor_concurrence[b] = in_domain ? ih_min_concurrence(r) : kNaN;
    }
    return out;
}

double zone_violation(double lambda_max, double C) {
    double v = 0.0;
    if (lambda_max >= 0.5) {
        v = std::max(v, C - lambda_max);
        v = std::max(v, (2.0 * lambda_max - 1.0) - C);
    } else if (lambda_max >= 1.0 / 3.0) {
        v = std::max(v, C - (3.0 * lambda_max - 1.0));
        v = std::max(v, -C);
    } else {
        v = std::max(v, C);
    }
    return v;
}

namespace {

int zone_of(double lambda_max) {
    if (lambda_max >= 0.5) return 0;
    if (lambda_max >= 1.0 / 3.0) return 1;
    return 2;
}

struct LambdaChunk {
    std::vector<std::uint64_t> counts;
    std::vector<double> max_C;
    std::vector<double> min_C;
    ZoneReport zones;
    std::vector<MeasureRecord> records;
};

}  // namespace

LambdaScanResult band_scan_lambda(const SweepConfig& config, const RecordSink& sink) {
    check_config(config);
    if (config.ensemble != Ensemble::IhOnly)
        throw std::invalid_argument("band_scan_lambda: contour scan runs on the IH ensemble");

    const int bins = config.bins;
    const bool keep_records = static_cast<bool>(sink);

    auto work = [&](std::uint64_t, std::uint64_t count, RandomStream& rng) {
        LambdaChunk ch;
        ch.counts.assign(bins, 0);
        ch.max_C.assign(bins, kNaN);
        ch.min_C.assign(bins, kNaN);
        for (std::uint64_t i = 0; i < count; ++i) {
            auto [spec, state] = ih_random(rng);
            MeasureRecord r = measure_record(state, config.qset, config.base);
            check_record(r);
            ++ch.zones.samples;
            const int z = zone_of(r.lambda_max);
            ++ch.zones.zone_counts[z];
            const double v = zone_violation(r.lambda_max, r.C);
            if (v > 1e-9) ++ch.zones.zone_violations[z];
            ch.zones.max_violation = std::max(ch.zones.max_violation, v);
            const int b = bin_of(r.lambda_max, bins, config.range_lo, config.range_hi);
            if (b >= 0) {
                ++ch.counts[b];
                if (!(ch.max_C[b] >= r.C)) ch.max_C[b] = r.C;
                if (!(ch.min_C[b] <= r.C)) ch.min_C[b] = r.C;
            }
            if (keep_records) ch.records.push_back(std::move(r));
        }
        return ch;
    };

    LambdaScanResult out;
    out.bins.bin_centers = bin_centers(bins, config.range_lo, config.range_hi);
    out.bins.counts.assign(bins, 0);
    out.bins.max_C.assign(bins, kNaN);
    auto& min_c = out.bins.aux["min_C"];
    min_c.assign(bins, kNaN);

    run_chunked<LambdaChunk>(config.samples, config.workers, config.seed, work,
                             [&](LambdaChunk&& ch) {
                                 for (int b = 0; b < bins; ++b) {
                                     out.bins.counts[b] += ch.counts[b];
                                     if (!std::isnan(ch.max_C[b]) &&
                                         !(out.bins.max_C[b] >= ch.max_C[b]))
                                         out.bins.max_C[b] = ch.max_C[b];
                                     if (!std::isnan(ch.min_C[b]) && !(min_c[b] <= ch.min_C[b]))
                                         min_c[b] = ch.min_C[b];
                                 }
                                 out.zones.samples += ch.zones.samples;
                                 for (int z = 0; z < 3; ++z) {
                                     out.zones.zone_counts[z] += ch.zones.zone_counts[z];
                                     out.zones.zone_violations[z] += ch.zones.zone_violations[z];
                                 }
                                 out.zones.max_violation =
                                     std::max(out.zones.max_violation, ch.zones.max_violation);
                                 for (const MeasureRecord& r : ch.records) sink(r);
                             });

    // MEMS overlay: lambda_max(x) = 1/3 + x/2 below the branch point, x
    // above it
    const int grid = 201;
    out.mems_overlay.reserve(grid);
    for (int i = 0; i < grid; ++i) {
        const double x = static_cast<double>(i) / (grid - 1);
        const double lm = x <= 2.0 / 3.0 ? 1.0 / 3.0 + 0.5 * x : x;
        out.mems_overlay.push_back({lm, x});
    }
    return out;
}

namespace {

struct EscreChunk {
    std::vector<std::uint64_t> counts;
    std::vector<double> max_C;
};

}  // namespace

BinSeries escre_max_sweep(const SweepConfig& config) {
    check_config(config);
    if (config.ensemble != Ensemble::ZhslAll)
        throw std::invalid_argument("escre_max_sweep: ensemble must be zhsl");
    bool has_inf = false;
    for (double q : config.qset) has_inf = has_inf || std::isinf(q);
    if (!has_inf)
        throw std::invalid_argument("escre_max_sweep: classifier qset must include q = inf");

    const int bins = config.bins;

    auto work = [&](std::uint64_t, std::uint64_t count, RandomStream& rng) {
        EscreChunk ch;
        ch.counts.assign(bins, 0);
        ch.max_C.assign(bins, kNaN);
        for (std::uint64_t i = 0; i < count; ++i) {
            const MeasureRecord r = measure_record(zhsl_state(rng), config.qset, config.base);
            check_record(r);
            if (!r.entangled || !r.classical_ineq_hold) continue;
            const int b = bin_of(r.R, bins, config.range_lo, config.range_hi);
            if (b < 0) continue;
            ++ch.counts[b];
            if (!(ch.max_C[b] >= r.C)) ch.max_C[b] = r.C;
        }
        return ch;
    };

    BinSeries out;
    out.bin_centers = bin_centers(bins, config.range_lo, config.range_hi);
    out.counts.assign(bins, 0);
    out.max_C.assign(bins, kNaN);

    run_chunked<EscreChunk>(config.samples, config.workers, config.seed, work,
                            [&](EscreChunk&& ch) {
                                for (int b = 0; b < bins; ++b) {
                                    out.counts[b] += ch.counts[b];
                                    if (!std::isnan(ch.max_C[b]) && !(out.max_C[b] >= ch.max_C[b]))
                                        out.max_C[b] = ch.max_C[b];
                                }
                            });

    auto& flags = out.aux["undersampled"];
    flags.assign(bins, 0.0);
    for (int b = 0; b < bins; ++b)
        if (out.counts[b] < config.count_floor) flags[b] = 1.0;
    return out;
}

FloorCheckReport concurrence_floor_check(int grid_points, std::uint64_t random_samples,
                                         const SeedSpec& seed, double r_lo, double r_hi) {
    if (grid_points < 2) throw std::invalid_argument("concurrence_floor_check: need >= 2 points");
    if (!(r_lo >= 1.0 && r_hi <= 3.0 && r_lo < r_hi))
        throw std::invalid_argument("concurrence_floor_check: range must sit inside [1,3]");

    FloorCheckReport rep;
    rep.equality_family.reserve(grid_points);
    // extremal spectra (a, (1-a)/3, (1-a)/3, (1-a)/3): a in [1/2, 1] covers
    // R from 3 down to 1
    for (int i = 0; i < grid_points; ++i) {
        const double a = 0.5 + 0.5 * static_cast<double>(i) / (grid_points - 1);
        const double rest = (1.0 - a) / 3.0;
        const Spectrum4 s = Spectrum4::from_sorted({a, rest, rest, rest});
        const double omega = a * a + (1.0 - a) * (1.0 - a) / 3.0;
        FloorCheckPoint pt;
        pt.a = a;
        pt.R = 1.0 / omega;
        pt.concurrence = concurrence_ih(s);
        pt.floor = ih_min_concurrence(pt.R);
        rep.max_equality_gap =
            std::max(rep.max_equality_gap, std::abs(pt.concurrence - pt.floor));
        rep.equality_family.push_back(pt);
    }

    RandomStream rng = split_stream(seed, 0);
    rep.min_random_gap = std::numeric_limits<double>::infinity();
    std::uint64_t outside_violations = 0;
    std::uint64_t attempts = 0;
    const std::uint64_t max_attempts = random_samples * 1000 + 1000;
    while (rep.random_checked < random_samples && attempts < max_attempts) {
        ++attempts;
        const auto w = simplex_point(4, rng);
        const Spectrum4 s = Spectrum4::sorted_from({w[0], w[1], w[2], w[3]});
        const double omega =
            s.p[0] * s.p[0] + s.p[1] * s.p[1] + s.p[2] * s.p[2] + s.p[3] * s.p[3];
        const double R = 1.0 / omega;
        if (R < 3.0 - 1e-12) {
            const double gap = concurrence_ih(s) - ih_min_concurrence(R);
            if (R >= r_lo && R <= r_hi) {
                ++rep.random_checked;
                rep.min_random_gap = std::min(rep.min_random_gap, gap);
            } else if (R > r_hi) {
                ++rep.outside_checked;
                if (gap < 0.0) ++outside_violations;
            }
        }
    }
    if (rep.random_checked < random_samples)
        throw std::runtime_error("concurrence_floor_check: rejection sampling starved");
    if (rep.outside_checked > 0)
        rep.outside_violation_rate =
            static_cast<double>(outside_violations) / static_cast<double>(rep.outside_checked);
    return rep;
}

namespace {

// polynomial extrapolation of (eps_i, D_i) to eps = 0 (Neville scheme)
double extrapolate_to_zero(std::span<const double> eps, std::span<const double> val) {
    std::vector<double> t(val.begin(), val.end());
    const std::size_t n = t.size();
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = 0; i + level < n; ++i)
            t[i] = t[i + 1] + (t[i + 1] - t[i]) * eps[i + level] / (eps[i] - eps[i + level]);
    return t[0];
}

}  // namespace

SlopeReport pure_limit_slope(double q, std::span<const double> epsilons) {
    if (!(q > 1.0) || !std::isfinite(q))
        throw std::invalid_argument("pure_limit_slope: q must be finite and > 1");
    if (epsilons.empty()) throw std::invalid_argument("pure_limit_slope: empty epsilon ladder");

    SlopeReport rep;
    rep.q = q;
    rep.epsilons.assign(epsilons.begin(), epsilons.end());
    const EntropyParams params{q, 2.0};

    const double s_at_1 = conditional_renyi(mems(1.0), params, Subsystem::B);
    for (double eps : epsilons) {
        if (!(eps > 0.0 && eps < 1.0 / 3.0))
            throw std::invalid_argument("pure_limit_slope: epsilon out of range");
        const double x = 1.0 - eps;
        const double s = conditional_renyi(mems(x), params, Subsystem::B);
        // along MEMS the concurrence equals x, so Delta C = -eps
        rep.raw_slopes.push_back((s - s_at_1) / (x - 1.0));
    }
    rep.extrapolated = extrapolate_to_zero(rep.epsilons, rep.raw_slopes);

    const double ln2 = std::log(2.0);
    rep.candidate_q = -q / ((q - 1.0) * ln2);
    rep.candidate_2q = -2.0 * q / ((q - 1.0) * ln2);
    rep.rel_err_q = std::abs(rep.extrapolated - rep.candidate_q) / std::abs(rep.candidate_q);
    rep.rel_err_2q = std::abs(rep.extrapolated - rep.candidate_2q) / std::abs(rep.candidate_2q);
    if (rep.rel_err_q <= 0.02)
        rep.matched = "q";
    else if (rep.rel_err_2q <= 0.02)
        rep.matched = "2q";
    else
        rep.matched = "none";
    return rep;
}

std::vector<ProfilePoint> mems_conditional_profile(std::span<const double> x_grid) {
    std::vector<ProfilePoint> out;
    out.reserve(x_grid.size());
    const EntropyParams params{kQInf, 2.0};
    for (double x : x_grid) {
        const DensityMatrix4 rho = mems(x);
        ProfilePoint p;
        p.x = x;
        p.R = participation_ratio(rho);
        p.C = concurrence(rho).C;
        p.cond_renyi_inf_bits = conditional_renyi(rho, params, Subsystem::B);
        out.push_back(p);
    }
    return out;
}

}  // namespace qmix
