#include "qmix/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qmix {

namespace {

template <std::size_t N>
std::array<double, N> clip_and_renormalize(const std::array<double, N>& v) {
    std::array<double, N> out{};
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        if (v[i] < -kPsdSlack)
            throw std::invalid_argument("spectrum has eigenvalue " + std::to_string(v[i]) +
                                        " below the round-off slack");
        out[i] = v[i] < kSpectrumNoiseFloor ? 0.0 : v[i];
        sum += out[i];
    }
    if (std::abs(sum - 1.0) > 1e-8)
        throw std::invalid_argument("spectrum sums to " + std::to_string(sum));
    for (double& p : out) p /= sum;
    return out;
}

void require_q(double q) {
    if (!(q > 0.0)) throw std::invalid_argument("entropic index q must be > 0");
}

double omega_q(std::span<const double> probs, double q) {
    double w = 0.0;
    for (double p : probs)
        if (p > 0.0) w += std::pow(p, q);
    return w;
}

double von_neumann_nats(std::span<const double> probs) {
    double s = 0.0;
    for (double p : probs)
        if (p > 0.0) s -= p * std::log(p);
    return s;
}

double max_prob(std::span<const double> probs) {
    double m = 0.0;
    for (double p : probs) m = std::max(m, p);
    return m;
}

double renyi_nats(std::span<const double> probs, double q) {
    if (q == kQ1) return von_neumann_nats(probs);
    if (std::isinf(q)) return -std::log(max_prob(probs));
    return std::log(omega_q(probs, q)) / (1.0 - q);
}

double cond_renyi_nats(std::span<const double> p_ab, std::span<const double> p_cond, double q) {
    return renyi_nats(p_ab, q) - renyi_nats(p_cond, q);
}

double cond_tsallis_value(std::span<const double> p_ab, std::span<const double> p_cond, double q) {
    if (q == kQ1) return von_neumann_nats(p_ab) - von_neumann_nats(p_cond);
    // denominator 1 + (1-q) S_T(cond) collapses to omega_q(cond), which is
    // strictly positive; this form avoids the cancellation
    return (tsallis_entropy(p_ab, q) - tsallis_entropy(p_cond, q)) / omega_q(p_cond, q);
}

// eigendecomposition of rho plus the clipped spectra of rho and both
// reduced states; shared by the conditional entropies and measure_record
struct StateSpectra {
    EigenSystem<4> eig;
    std::array<double, 4> p_ab{};
    std::array<double, 2> p_a{}, p_b{};
};

StateSpectra analyze(const DensityMatrix4& rho) {
    StateSpectra s;
    s.eig = hermitian_eigensystem(rho.m);
    s.p_ab = clipped_spectrum(s.eig.values);
    const auto ea = hermitian_eigensystem(partial_trace(rho.m, Subsystem::A));
    const auto eb = hermitian_eigensystem(partial_trace(rho.m, Subsystem::B));
    s.p_a = clipped_spectrum(ea.values);
    s.p_b = clipped_spectrum(eb.values);
    return s;
}

double purity(const Mat4& m) {
    double t = 0.0;
    for (const cplx& v : m.e) t += std::norm(v);
    return t;
}

}  // namespace

std::array<double, 4> clipped_spectrum(const std::array<double, 4>& v) {
    return clip_and_renormalize(v);
}
std::array<double, 2> clipped_spectrum(const std::array<double, 2>& v) {
    return clip_and_renormalize(v);
}

double renyi_entropy(std::span<const double> probs, const EntropyParams& params) {
    require_q(params.q);
    return renyi_nats(probs, params.q) / std::log(params.base);
}

double tsallis_entropy(std::span<const double> probs, double q) {
    require_q(q);
    if (!std::isfinite(q))
        throw std::invalid_argument("tsallis_entropy: q must be finite (the max-entropy limit "
                                    "is a Renyi quantity)");
    if (q == kQ1) return von_neumann_nats(probs);
    return (1.0 - omega_q(probs, q)) / (q - 1.0);
}

double tsallis_from_renyi(double renyi_nats_value, double q) {
    require_q(q);
    if (q == kQ1) return renyi_nats_value;
    return (std::exp((1.0 - q) * renyi_nats_value) - 1.0) / (1.0 - q);
}

double conditional_tsallis(const DensityMatrix4& rho, double q, Subsystem conditioned_on) {
    require_q(q);
    if (!std::isfinite(q))
        throw std::invalid_argument("conditional_tsallis: q must be finite");
    const StateSpectra s = analyze(rho);
    const auto& pc = conditioned_on == Subsystem::B ? s.p_b : s.p_a;
    return cond_tsallis_value(s.p_ab, pc, q);
}

double conditional_renyi(const DensityMatrix4& rho, const EntropyParams& params,
                         Subsystem conditioned_on) {
    require_q(params.q);
    const StateSpectra s = analyze(rho);
    const auto& pc = conditioned_on == Subsystem::B ? s.p_b : s.p_a;
    return cond_renyi_nats(s.p_ab, pc, params.q) / std::log(params.base);
}

bool classical_inequalities_hold(const DensityMatrix4& rho, std::span<const double> qset) {
    const StateSpectra s = analyze(rho);
    for (double q : qset) {
        require_q(q);
        if (cond_renyi_nats(s.p_ab, s.p_b, q) < -kClassicalSlack) return false;
        if (cond_renyi_nats(s.p_ab, s.p_a, q) < -kClassicalSlack) return false;
    }
    return true;
}

namespace {

ConcurrenceDetail concurrence_from_eig(const DensityMatrix4& rho, const EigenSystem<4>& eig) {
    // spec(rho * rho~) equals spec(sqrt(rho) rho~ sqrt(rho)), and the latter
    // is Hermitian PSD, so the Hermitian solver applies
    std::array<double, 4> root{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (eig.values[k] < -kPsdSlack)
            throw std::invalid_argument("concurrence: state is not positive semidefinite");
        root[k] = eig.values[k] < kSpectrumNoiseFloor ? 0.0 : std::sqrt(eig.values[k]);
    }
    Mat4 sqrt_rho;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx v = 0.0;
            for (std::size_t k = 0; k < 4; ++k)
                v += eig.vectors(i, k) * root[k] * std::conj(eig.vectors(j, k));
            sqrt_rho(i, j) = v;
        }
    const Mat4 m = sqrt_rho * spin_flip(rho.m) * sqrt_rho;
    const auto meig = hermitian_eigensystem(m);

    ConcurrenceDetail d;
    for (std::size_t k = 0; k < 4; ++k)
        d.lambdas[k] =
            meig.values[k] < kSpectrumNoiseFloor ? 0.0 : std::sqrt(meig.values[k]);
    d.C = std::max(0.0, d.lambdas[0] - d.lambdas[1] - d.lambdas[2] - d.lambdas[3]);
    return d;
}

}  // namespace

ConcurrenceDetail concurrence(const DensityMatrix4& rho) {
    return concurrence_from_eig(rho, hermitian_eigensystem(rho.m));
}

double concurrence_ih(const Spectrum4& p) {
    return std::max(0.0, p.p[0] - p.p[2] - 2.0 * std::sqrt(p.p[1] * p.p[3]));
}

double entanglement_of_formation(double concurrence) {
    if (!(concurrence >= -1e-12 && concurrence <= 1.0 + 1e-12))
        throw std::invalid_argument("entanglement_of_formation: concurrence must lie in [0,1]");
    const double c = std::clamp(concurrence, 0.0, 1.0);
    const double x = 0.5 * (1.0 + std::sqrt(1.0 - c * c));
    auto term = [](double v) { return v > 0.0 ? -v * std::log2(v) : 0.0; };
    return term(x) + term(1.0 - x);
}

double participation_ratio(const DensityMatrix4& rho) { return 1.0 / purity(rho.m); }

double linear_entropy(const DensityMatrix4& rho) { return 1.0 - purity(rho.m); }

double fully_entangled_fraction(const DensityMatrix4& rho) {
    static const Mat4 magic = magic_basis();
    static const Mat4 magic_dag = magic.adjoint();
    const Mat4 rm = magic_dag * rho.m * magic;
    Mat4 re;
    for (std::size_t i = 0; i < 16; ++i) re.e[i] = rm.e[i].real();
    return hermitian_eigensystem(re).values[0];
}

bool is_ppt(const DensityMatrix4& rho) {
    const auto eig = hermitian_eigensystem(partial_transpose(rho.m, Subsystem::B));
    return eig.values[3] >= -kPsdSlack;
}

double ih_min_concurrence(double R) {
    if (!(R >= 1.0 - 1e-9 && R <= 3.0 + 1e-9))
        throw std::invalid_argument("ih_min_concurrence: R must lie in [1,3], got " +
                                    std::to_string(R));
    R = std::clamp(R, 1.0, 3.0);
    return (std::sqrt(3.0 * R * (4.0 - R)) - R) / (2.0 * R);
}

MeasureRecord measure_record(const DensityMatrix4& rho, std::span<const double> qset,
                             double base) {
    const StateSpectra s = analyze(rho);
    const double ln_base = std::log(base);

    MeasureRecord r;
    r.C = concurrence_from_eig(rho, s.eig).C;
    r.E = entanglement_of_formation(r.C);
    r.R = participation_ratio(rho);
    r.lambda_max = s.p_ab[0];
    r.SL = linear_entropy(rho);
    r.cond_renyi_inf_AB = cond_renyi_nats(s.p_ab, s.p_b, kQInf) / ln_base;
    r.cond_renyi_inf_BA = cond_renyi_nats(s.p_ab, s.p_a, kQInf) / ln_base;
    r.F_EF = fully_entangled_fraction(rho);
    r.entangled = r.C > kEntangledThreshold;

    r.classical_ineq_hold = true;
    for (double q : qset) {
        require_q(q);
        const double ab = cond_renyi_nats(s.p_ab, s.p_b, q);
        const double ba = cond_renyi_nats(s.p_ab, s.p_a, q);
        if (ab < -kClassicalSlack || ba < -kClassicalSlack) r.classical_ineq_hold = false;
        if (std::isfinite(q) && q != kQ1)
            r.cond_tsallis.push_back({q, cond_tsallis_value(s.p_ab, s.p_b, q),
                                      cond_tsallis_value(s.p_ab, s.p_a, q)});
    }
    return r;
}

}  // namespace qmix
