#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "qmix/measures.hpp"
#include "qmix/rng.hpp"
#include "qmix/sampler.hpp"

using namespace qmix;

TEST_CASE("streams are deterministic and split streams are disjoint") {
    RandomStream a = split_stream({123, 0}, 0);
    RandomStream b = split_stream({123, 0}, 0);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    RandomStream c0 = split_stream({123, 0}, 0);
    RandomStream c1 = split_stream({123, 0}, 1);
    int same = 0;
    for (int i = 0; i < 1000; ++i)
        if (c0.next_u64() == c1.next_u64()) ++same;
    CHECK(same == 0);

    // stream_index separates sequences as well
    RandomStream d0 = split_stream({123, 0}, 0);
    RandomStream d1 = split_stream({123, 1}, 0);
    same = 0;
    for (int i = 0; i < 1000; ++i)
        if (d0.next_u64() == d1.next_u64()) ++same;
    CHECK(same == 0);
}

TEST_CASE("haar unitary draws are unitary and reproducible") {
    RandomStream rng = split_stream({51, 0}, 0);
    for (int it = 0; it < 200; ++it) {
        const Mat4 u = haar_unitary<4>(rng);
        CHECK(max_abs_diff(u.adjoint() * u, Mat4::identity()) < 1e-10);
    }
    RandomStream r1 = split_stream({52, 0}, 7);
    RandomStream r2 = split_stream({52, 0}, 7);
    const Mat4 u1 = haar_unitary<4>(r1);
    const Mat4 u2 = haar_unitary<4>(r2);
    CHECK(max_abs_diff(u1, u2) == 0.0);  // bit-for-bit
}

TEST_CASE("haar first moment: E|U_00|^2 = 1/4") {
    RandomStream rng = split_stream({53, 0}, 0);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int it = 0; it < n; ++it) {
        const Mat4 u = haar_unitary<4>(rng);
        const double v = std::norm(u(0, 0));
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double se = std::sqrt(var / n);
    CHECK(std::abs(mean - 0.25) < 3.0 * se);
    // |<00|U|00>|^2 follows Beta(1,3): second moment 1/10
    CHECK(std::abs(sum2 / n - 0.1) < 5.0 * se);
}

TEST_CASE("haar distribution is invariant under fixed left rotations") {
    // compare the |(VU)_00|^2 mean against the Haar value
    RandomStream rng = split_stream({54, 0}, 0);
    const Mat4 v = haar_unitary<4>(rng);
    const int n = 50000;
    double sum = 0.0;
    for (int it = 0; it < n; ++it) {
        const Mat4 u = haar_unitary<4>(rng);
        sum += std::norm((v * u)(0, 0));
    }
    const double se = std::sqrt(0.0375 / n);
    CHECK(std::abs(sum / n - 0.25) < 4.0 * se);
}

TEST_CASE("simplex point properties") {
    RandomStream rng = split_stream({55, 0}, 0);
    SUBCASE("normalization and nonnegativity") {
        for (int it = 0; it < 1000; ++it) {
            const auto p = simplex_point(4, rng);
            double sum = 0.0;
            for (double v : p) {
                CHECK(v >= 0.0);
                sum += v;
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
        CHECK_THROWS_AS(simplex_point(1, rng), std::invalid_argument);
    }
    SUBCASE("dim 2 first coordinate is uniform (Kolmogorov-Smirnov)") {
        const int n = 100000;
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = simplex_point(2, rng)[0];
        std::sort(xs.begin(), xs.end());
        double d = 0.0;
        for (int i = 0; i < n; ++i) {
            d = std::max(d, std::abs(xs[i] - static_cast<double>(i) / n));
            d = std::max(d, std::abs(static_cast<double>(i + 1) / n - xs[i]));
        }
        // 1% critical value ~ 1.6276/sqrt(n)
        CHECK(d < 1.6276 / std::sqrt(static_cast<double>(n)));
    }
    SUBCASE("dim 4 coordinate means are 1/4") {
        const int n = 100000;
        std::array<double, 4> sum{};
        for (int i = 0; i < n; ++i) {
            const auto p = simplex_point(4, rng);
            for (int k = 0; k < 4; ++k) sum[k] += p[k];
        }
        const double se = std::sqrt(0.0375 / n);  // Dirichlet(1,1,1,1) coordinate variance
        for (int k = 0; k < 4; ++k) CHECK(std::abs(sum[k] / n - 0.25) < 3.0 * se);
    }
    SUBCASE("dim 4 marginal density is 3(1-x)^2 (chi-square at 1%)") {
        // 20 equal-probability bins via the inverse CDF x = 1 - (1-u)^(1/3)
        constexpr int n = 100000, bins = 20;
        std::array<int, bins> count{};
        for (int i = 0; i < n; ++i) {
            const double x = simplex_point(4, rng)[0];
            const double u = 1.0 - std::pow(1.0 - x, 3.0);  // CDF value, uniform if density matches
            int b = static_cast<int>(u * bins);
            if (b == bins) b = bins - 1;
            ++count[b];
        }
        double chi2 = 0.0;
        const double expect = static_cast<double>(n) / bins;
        for (int b = 0; b < bins; ++b)
            chi2 += (count[b] - expect) * (count[b] - expect) / expect;
        CHECK(chi2 < 36.191);  // chi-square(19 dof) 1% critical value
    }
}

TEST_CASE("zhsl_state construction") {
    RandomStream rng = split_stream({56, 0}, 0);
    SUBCASE("output spectrum equals the drawn simplex point") {
        for (int it = 0; it < 200; ++it) {
            const ZhslDraw d = zhsl_draw(rng);
            auto sorted = d.weights;
            std::sort(sorted.begin(), sorted.end(), std::greater<double>());
            const auto eig = hermitian_eigensystem(d.state.m).values;
            for (int k = 0; k < 4; ++k) CHECK(std::abs(eig[k] - sorted[k]) < 1e-10);
        }
    }
    SUBCASE("states are valid density matrices") {
        for (int it = 0; it < 200; ++it) {
            const DensityMatrix4 rho = zhsl_state(rng);
            CHECK(rho.m.hermiticity_gap() < 1e-12);
            CHECK(std::abs(rho.m.trace() - cplx{1.0}) < 1e-12);
            CHECK(hermitian_eigensystem(rho.m).values[3] > -1e-12);
        }
    }
    SUBCASE("fixed seed reproduces the state stream bit-for-bit") {
        RandomStream r1 = split_stream({99, 3}, 5);
        RandomStream r2 = split_stream({99, 3}, 5);
        for (int it = 0; it < 20; ++it)
            CHECK(max_abs_diff(zhsl_state(r1).m, zhsl_state(r2).m) == 0.0);
    }
}

TEST_CASE("states with R >= 3 are PPT") {
    RandomStream rng = split_stream({57, 0}, 0);
    int seen = 0;
    for (int it = 0; it < 20000; ++it) {
        const DensityMatrix4 rho = zhsl_state(rng);
        if (participation_ratio(rho) >= 3.0) {
            ++seen;
            CHECK(is_ppt(rho));
        }
    }
    CHECK(seen > 1000);  // the region is well populated
}

TEST_CASE("ih_random returns a sorted spectrum matching its state") {
    RandomStream rng = split_stream({58, 0}, 0);
    for (int it = 0; it < 500; ++it) {
        const auto [spec, rho] = ih_random(rng);
        for (int k = 0; k + 1 < 4; ++k) CHECK(spec.p[k] >= spec.p[k + 1]);
        CHECK(std::abs(concurrence(rho).C - concurrence_ih(spec)) < 1e-10);
    }
}

TEST_CASE("ih_random states stay below the MEMS ceiling") {
    RandomStream rng = split_stream({59, 0}, 0);
    for (int it = 0; it < 10000; ++it) {
        const auto [spec, rho] = ih_random(rng);
        const double r = participation_ratio(rho);
        if (r <= 3.0)
            CHECK(concurrence_ih(spec) <= mems_x_from_R(r) + 1e-9);
    }
}
