// Command-line surface: compute measures for a given state, run samplers and
// sweeps, verify the analytic identities, and emit reproducible CSV/JSON
// artifacts. Exit codes: 0 success, 1 assertion/verification failure,
// 2 invalid input, 3 numeric failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmix/experiments.hpp"
#include "qmix/io.hpp"
#include "qmix/sampler.hpp"

using nlohmann::json;
using namespace qmix;

namespace {

std::vector<double> parse_qset(const std::string& text) {
    std::vector<double> qs;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok == "inf" || tok == "Inf" || tok == "INF") {
            qs.push_back(kQInf);
            continue;
        }
        std::size_t pos = 0;
        double q = 0.0;
        try {
            q = std::stod(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size() || !(q > 0.0))
            throw std::invalid_argument("invalid q value '" + tok + "' (want a positive number or 'inf')");
        qs.push_back(q);
    }
    if (qs.empty()) throw std::invalid_argument("empty q list");
    return qs;
}

std::string qset_echo(const std::vector<double>& qs) {
    std::string s;
    for (double q : qs) {
        if (!s.empty()) s += ",";
        if (std::isinf(q))
            s += "inf";
        else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", q);
            s += buf;
        }
    }
    return s;
}

std::array<double, 4> parse_four(const std::string& text, const char* what) {
    std::array<double, 4> v{};
    std::stringstream ss(text);
    std::string tok;
    std::size_t i = 0;
    while (std::getline(ss, tok, ',')) {
        if (i >= 4) throw std::invalid_argument(std::string(what) + ": expected 4 values");
        v[i++] = std::stod(tok);
    }
    if (i != 4) throw std::invalid_argument(std::string(what) + ": expected 4 values");
    return v;
}

// data goes to --out or stdout
class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

struct CommonFlags {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
    int workers = 0;
    std::string out_path;
    std::string qset_text = "inf";
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_seed = true) {
    if (with_seed) {
        // QMIX_SEED overrides the default; an explicit --seed wins. The
        // manifest records whatever value was resolved.
        if (const char* env = std::getenv("QMIX_SEED")) f.master_seed = std::stoull(env);
        cmd->add_option("--seed", f.master_seed, "master seed (default from QMIX_SEED if set)")
            ->capture_default_str();
        cmd->add_option("--stream", f.stream_index, "stream index")->capture_default_str();
        cmd->add_option("--workers", f.workers,
                        "worker threads (0 = all cores; output does not depend on it)")
            ->capture_default_str();
    }
    cmd->add_option("--q", f.qset_text, "entropic index list, e.g. 0.5,2,inf")
        ->capture_default_str();
    cmd->add_option("--out", f.out_path, "output file (default stdout)");
}

RunManifest make_manifest(const std::string& command, const CommonFlags& f,
                          std::map<std::string, std::string> extra) {
    RunManifest m;
    m.command = command;
    m.seed = {f.master_seed, f.stream_index};
    m.params = std::move(extra);
    m.params["q"] = qset_echo(parse_qset(f.qset_text));
    m.params["workers"] = std::to_string(f.workers);
    return m;
}

void finish(RunManifest& m, const std::chrono::steady_clock::time_point& t0) {
    m.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "# wall_time_s: " << m.wall_time_s << "\n";
}

// ---------------------------------------------------------------- measure

struct MeasureArgs {
    CommonFlags common;
    std::string family;
    std::string state_path;
    double x = 0.0;
    std::string p_text, w_text;
    double tol = 1e-9;
    bool have_x = false;
};

int run_measure(MeasureArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    DensityMatrix4 rho{};
    std::map<std::string, std::string> echo;
    if (!a.state_path.empty()) {
        rho = validate_density(load_density_file(a.state_path), a.tol);
        echo["state"] = a.state_path;
        echo["tol"] = format_double(a.tol);
    } else if (a.family == "mems") {
        if (!a.have_x) throw std::invalid_argument("measure --family mems needs --x");
        rho = mems(a.x);
        echo["family"] = "mems";
        echo["x"] = format_double(a.x);
    } else if (a.family == "ih") {
        if (a.p_text.empty()) throw std::invalid_argument("measure --family ih needs --p");
        rho = ih_state(Spectrum4::from_sorted(parse_four(a.p_text, "--p")));
        echo["family"] = "ih";
        echo["p"] = a.p_text;
    } else if (a.family == "bell-diag") {
        if (a.w_text.empty()) throw std::invalid_argument("measure --family bell-diag needs --w");
        rho = bell_diagonal(parse_four(a.w_text, "--w"));
        echo["family"] = "bell-diag";
        echo["w"] = a.w_text;
    } else {
        throw std::invalid_argument("measure: give --state FILE or --family mems|ih|bell-diag");
    }

    RunManifest m = make_manifest("measure", a.common, std::move(echo));
    const MeasureRecord rec = measure_record(rho, parse_qset(a.common.qset_text));

    json j;
    j["manifest"] = manifest_json(m);
    j["record"] = record_json(rec);
    Output out(a.common.out_path);
    out.stream() << j.dump(2) << "\n";
    finish(m, t0);
    return 0;
}

// ----------------------------------------------------------------- sample

struct SampleArgs {
    CommonFlags common;
    std::string ensemble = "zhsl";
    std::uint64_t n = 1000;
    std::string format = "csv";
};

int run_sample(SampleArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    if (a.ensemble != "zhsl" && a.ensemble != "ih")
        throw std::invalid_argument("sample: --ensemble must be zhsl or ih");
    if (a.format != "csv" && a.format != "json")
        throw std::invalid_argument("sample: --format must be csv or json");

    RunManifest m = make_manifest("sample", a.common,
                                  {{"ensemble", a.ensemble},
                                   {"n", std::to_string(a.n)},
                                   {"format", a.format}});

    SweepConfig cfg;
    cfg.samples = a.n;
    cfg.bins = 2;
    cfg.qset = parse_qset(a.common.qset_text);
    cfg.seed = m.seed;
    cfg.ensemble = a.ensemble == "zhsl" ? Ensemble::ZhslAll : Ensemble::IhOnly;
    cfg.workers = a.common.workers;

    Output out(a.common.out_path);
    std::ostream& os = out.stream();
    if (a.format == "csv") {
        os << csv_manifest_header(m) << kCsvHeader << "\n";
        band_scan_R(cfg, [&](const MeasureRecord& r) { os << csv_row(r) << "\n"; });
    } else {
        json rows = json::array();
        band_scan_R(cfg, [&](const MeasureRecord& r) { rows.push_back(record_json(r)); });
        json j;
        j["manifest"] = manifest_json(m);
        j["records"] = std::move(rows);
        os << j.dump(2) << "\n";
    }
    finish(m, t0);
    return 0;
}

// ------------------------------------------------------------ sweep-escre

struct SweepArgs {
    CommonFlags common;
    std::uint64_t n = 1'000'000;
    int bins = 40;
    double r_min = 1.0, r_max = 3.0;
    std::uint64_t count_floor = 0;
};

int run_sweep_escre(SweepArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest m = make_manifest("sweep-escre", a.common,
                                  {{"n", std::to_string(a.n)},
                                   {"bins", std::to_string(a.bins)},
                                   {"r-min", format_double(a.r_min)},
                                   {"r-max", format_double(a.r_max)},
                                   {"count-floor", std::to_string(a.count_floor)}});

    SweepConfig cfg;
    cfg.samples = a.n;
    cfg.bins = a.bins;
    cfg.range_lo = a.r_min;
    cfg.range_hi = a.r_max;
    cfg.qset = parse_qset(a.common.qset_text);
    cfg.seed = m.seed;
    cfg.ensemble = Ensemble::ZhslAll;
    cfg.workers = a.common.workers;
    cfg.count_floor = a.count_floor;

    const BinSeries series = escre_max_sweep(cfg);
    json j;
    j["manifest"] = manifest_json(m);
    j["series"] = bin_series_json(series);
    Output out(a.common.out_path);
    out.stream() << j.dump(2) << "\n";
    finish(m, t0);
    return 0;
}

// ------------------------------------------------------------------- band

struct BandArgs {
    CommonFlags common;
    std::string by = "r";
    std::string ensemble = "ih";
    std::uint64_t n = 100'000;
    int bins = 40;
    double lo = -1.0, hi = -1.0;  // defaults depend on --by
    std::string records_path;
};

int run_band(BandArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    if (a.by != "r" && a.by != "lambda")
        throw std::invalid_argument("band: --by must be r or lambda");
    const bool by_r = a.by == "r";
    if (a.lo < 0.0) a.lo = by_r ? 1.0 : 0.25;
    if (a.hi < 0.0) a.hi = by_r ? 3.0 : 1.0;

    RunManifest m = make_manifest("band", a.common,
                                  {{"by", a.by},
                                   {"ensemble", a.ensemble},
                                   {"n", std::to_string(a.n)},
                                   {"bins", std::to_string(a.bins)},
                                   {"lo", format_double(a.lo)},
                                   {"hi", format_double(a.hi)}});

    SweepConfig cfg;
    cfg.samples = a.n;
    cfg.bins = a.bins;
    cfg.range_lo = a.lo;
    cfg.range_hi = a.hi;
    cfg.qset = parse_qset(a.common.qset_text);
    cfg.seed = m.seed;
    cfg.workers = a.common.workers;
    if (a.ensemble == "zhsl")
        cfg.ensemble = Ensemble::ZhslAll;
    else if (a.ensemble == "ih")
        cfg.ensemble = Ensemble::IhOnly;
    else
        throw std::invalid_argument("band: --ensemble must be zhsl or ih");

    std::optional<std::ofstream> rec_file;
    RecordSink sink;
    if (!a.records_path.empty()) {
        rec_file.emplace(a.records_path, std::ios::binary);
        if (!*rec_file)
            throw std::invalid_argument("cannot open records file: " + a.records_path);
        *rec_file << csv_manifest_header(m) << kCsvHeader << "\n";
        sink = [&](const MeasureRecord& r) { *rec_file << csv_row(r) << "\n"; };
    }

    json j;
    j["manifest"] = manifest_json(m);
    if (by_r) {
        const BandScanResult res = band_scan_R(cfg, sink);
        j["series"] = bin_series_json(res.bins);
        j["overlays"] = {{"mems_concurrence", res.mems_concurrence},
                         {"floor_concurrence", res.floor_concurrence}};
    } else {
        const LambdaScanResult res = band_scan_lambda(cfg, sink);
        j["series"] = bin_series_json(res.bins);
        j["zones"] = {{"samples", res.zones.samples},
                      {"counts", res.zones.zone_counts},
                      {"violations", res.zones.zone_violations},
                      {"max_violation", res.zones.max_violation}};
        j["mems_overlay"] = res.mems_overlay;
    }
    Output out(a.common.out_path);
    out.stream() << j.dump(2) << "\n";
    finish(m, t0);
    return 0;
}

// ----------------------------------------------------------------- verify

struct VerifyArgs {
    CommonFlags common;
    std::string check;
    std::uint64_t n = 0;  // 0 = per-check default
};

int run_verify(VerifyArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest m = make_manifest("verify", a.common, {{"check", a.check}});
    json j;
    j["manifest"] = manifest_json(m);
    bool ok = true;

    if (a.check == "eq7") {
        const std::uint64_t n = a.n ? a.n : 100'000;
        m.params["n"] = std::to_string(n);
        const FloorCheckReport rep = concurrence_floor_check(100, n, m.seed, 1.0, 1.8);
        const bool eq_ok = rep.max_equality_gap <= 1e-12;
        const bool rnd_ok = rep.min_random_gap >= -1e-9;
        ok = eq_ok && rnd_ok;
        j["report"] = {{"max_equality_gap", rep.max_equality_gap},
                       {"random_checked", rep.random_checked},
                       {"min_random_gap", rep.min_random_gap},
                       {"outside_checked", rep.outside_checked},
                       {"outside_violation_rate", rep.outside_violation_rate},
                       {"equality_ok", eq_ok},
                       {"random_ok", rnd_ok}};
        std::cerr << (ok ? "PASS" : "FAIL") << " eq7: equality gap " << rep.max_equality_gap
                  << ", min random gap " << rep.min_random_gap << " over " << rep.random_checked
                  << " spectra\n";
    } else if (a.check == "eq8") {
        const std::array<double, 3> eps = {1e-2, 1e-3, 1e-4};
        const SlopeReport rep = pure_limit_slope(3.0, eps);
        ok = rep.matched != "none";
        j["report"] = {{"q", rep.q},
                       {"epsilons", rep.epsilons},
                       {"raw_slopes", rep.raw_slopes},
                       {"extrapolated", rep.extrapolated},
                       {"candidate_q", rep.candidate_q},
                       {"candidate_2q", rep.candidate_2q},
                       {"rel_err_q", rep.rel_err_q},
                       {"rel_err_2q", rep.rel_err_2q},
                       {"matched", rep.matched}};
        std::cerr << (ok ? "PASS" : "FAIL") << " eq8: slope " << rep.extrapolated
                  << " matches '" << rep.matched << "' form (rel err q: " << rep.rel_err_q
                  << ", 2q: " << rep.rel_err_2q << ")\n";
    } else if (a.check == "contours") {
        SweepConfig cfg;
        cfg.samples = a.n ? a.n : 100'000;
        m.params["n"] = std::to_string(cfg.samples);
        cfg.bins = 40;
        cfg.range_lo = 0.25;
        cfg.range_hi = 1.0;
        cfg.qset = parse_qset(a.common.qset_text);
        cfg.seed = m.seed;
        cfg.ensemble = Ensemble::IhOnly;
        cfg.workers = a.common.workers;
        const LambdaScanResult res = band_scan_lambda(cfg);
        std::uint64_t violations = 0;
        for (auto v : res.zones.zone_violations) violations += v;

        // witness spectra achieving both upper contours exactly
        double witness_gap = 0.0;
        for (int i = 0; i <= 50; ++i) {
            const double l1 = 0.5 + 0.5 * i / 50.0;
            const Spectrum4 s1 = Spectrum4::from_sorted({l1, 1.0 - l1, 0.0, 0.0});
            witness_gap = std::max(witness_gap, std::abs(concurrence_ih(s1) - l1));
            const double l2 = 1.0 / 3.0 + (0.5 - 1.0 / 3.0) * i / 50.0;
            const Spectrum4 s2 = Spectrum4::from_sorted({l2, l2, 1.0 - 2.0 * l2, 0.0});
            witness_gap =
                std::max(witness_gap, std::abs(concurrence_ih(s2) - (3.0 * l2 - 1.0)));
        }
        ok = violations == 0 && witness_gap <= 1e-12;
        j["report"] = {{"samples", res.zones.samples},
                       {"zone_counts", res.zones.zone_counts},
                       {"zone_violations", res.zones.zone_violations},
                       {"max_violation", res.zones.max_violation},
                       {"witness_gap", witness_gap}};
        std::cerr << (ok ? "PASS" : "FAIL") << " contours: " << violations << " violations, max "
                  << res.zones.max_violation << ", witness gap " << witness_gap << "\n";
    } else if (a.check == "ppt-vs-concurrence") {
        const std::uint64_t n = a.n ? a.n : 10'000;
        m.params["n"] = std::to_string(n);
        RandomStream rng = split_stream(m.seed, 0);
        std::uint64_t mismatches = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const DensityMatrix4 rho = zhsl_state(rng);
            const bool entangled = concurrence(rho).C > 1e-10;
            if (entangled == is_ppt(rho)) ++mismatches;
        }
        ok = mismatches == 0;
        j["report"] = {{"samples", n}, {"mismatches", mismatches}};
        std::cerr << (ok ? "PASS" : "FAIL") << " ppt-vs-concurrence: " << mismatches
                  << " mismatches over " << n << " states\n";
    } else {
        throw std::invalid_argument(
            "verify: --check must be eq7, eq8, contours or ppt-vs-concurrence");
    }

    j["pass"] = ok;
    Output out(a.common.out_path);
    out.stream() << j.dump(2) << "\n";
    finish(m, t0);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit mixed-state entanglement and q-entropy toolkit"};
    app.require_subcommand(1);

    MeasureArgs ma;
    CLI::App* measure = app.add_subcommand("measure", "measures of a single state");
    measure->add_option("--family", ma.family, "mems | ih | bell-diag");
    measure->add_option("--x", ma.x, "MEMS off-diagonal amplitude in [0,1]")
        ->check(CLI::Range(0.0, 1.0))
        ->each([&](const std::string&) { ma.have_x = true; });
    measure->add_option("--p", ma.p_text, "IH spectrum p1,p2,p3,p4 (descending)");
    measure->add_option("--w", ma.w_text, "Bell-diagonal weights w1,w2,w3,w4");
    measure->add_option("--state", ma.state_path, "density matrix JSON file");
    measure->add_option("--tol", ma.tol, "validation tolerance")->capture_default_str();
    add_common(measure, ma.common, false);

    SampleArgs sa;
    CLI::App* sample = app.add_subcommand("sample", "stream measure records for random states");
    sample->add_option("--ensemble", sa.ensemble, "zhsl | ih")->capture_default_str();
    sample->add_option("--n", sa.n, "number of states")->capture_default_str();
    sample->add_option("--format", sa.format, "csv | json")->capture_default_str();
    add_common(sample, sa.common);

    SweepArgs wa;
    CLI::App* sweep = app.add_subcommand(
        "sweep-escre", "per-R-bin maximum concurrence among entangled states that satisfy the "
                       "classical conditional-entropy inequalities");
    sweep->add_option("--n", wa.n, "sample count")->capture_default_str();
    sweep->add_option("--bins", wa.bins, "R bins")->capture_default_str();
    sweep->add_option("--r-min", wa.r_min, "")->capture_default_str();
    sweep->add_option("--r-max", wa.r_max, "")->capture_default_str();
    sweep->add_option("--count-floor", wa.count_floor, "flag bins with fewer qualifying states")
        ->capture_default_str();
    add_common(sweep, wa.common);

    BandArgs ba;
    CLI::App* band = app.add_subcommand("band", "concurrence band vs mixedness with analytic "
                                                "overlay curves");
    band->add_option("--by", ba.by, "binning variable: r | lambda")->capture_default_str();
    band->add_option("--ensemble", ba.ensemble, "ih | zhsl (r scan only)")->capture_default_str();
    band->add_option("--n", ba.n, "sample count")->capture_default_str();
    band->add_option("--bins", ba.bins, "bin count")->capture_default_str();
    band->add_option("--lo", ba.lo, "bin range low (default: 1 for r, 0.25 for lambda)");
    band->add_option("--hi", ba.hi, "bin range high (default: 3 for r, 1 for lambda)");
    band->add_option("--records", ba.records_path, "also dump per-state CSV records here");
    add_common(band, ba.common);

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand("verify", "run an analytic cross-check; exits 1 on "
                                                    "failure");
    verify->add_option("--check", va.check, "eq7 | eq8 | contours | ppt-vs-concurrence")
        ->required();
    verify->add_option("--n", va.n, "sample count override (0 = per-check default)")
        ->capture_default_str();
    add_common(verify, va.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*measure) return run_measure(ma);
        if (*sample) return run_sample(sa);
        if (*sweep) return run_sweep_escre(wa);
        if (*band) return run_band(ba);
        if (*verify) return run_verify(va);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
