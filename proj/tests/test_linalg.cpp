#include <doctest.h>

#include <cmath>

#include "qmix/density.hpp"
#include "qmix/linalg.hpp"
#include "qmix/rng.hpp"
#include "qmix/sampler.hpp"
#include "qmix/states.hpp"

using namespace qmix;

namespace {

Mat4 random_hermitian(RandomStream& rng) {
    Mat4 a;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) a(i, j) = cplx{rng.normal(), rng.normal()};
    Mat4 h;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return h;
}

template <std::size_t N>
double reconstruction_error(const Matrix<N>& h, const EigenSystem<N>& eig) {
    Matrix<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            cplx v = 0.0;
            for (std::size_t k = 0; k < N; ++k)
                v += eig.vectors(i, k) * eig.values[k] * std::conj(eig.vectors(j, k));
            r(i, j) = v;
        }
    return max_abs_diff(r, h);
}

template <std::size_t N>
double unitarity_defect(const Matrix<N>& v) {
    return max_abs_diff(v.adjoint() * v, Matrix<N>::identity());
}

Mat4 diag4(double a, double b, double c, double d) {
    Mat4 m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

const Mat2 kSigmaY = [] {
    Mat2 m;
    m(0, 1) = cplx{0.0, -1.0};
    m(1, 0) = cplx{0.0, 1.0};
    return m;
}();

Mat4 bell_phi_plus() {
    Mat4 m;
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    return m;
}

}  // namespace

TEST_CASE("eigensystem of a diagonal matrix") {
    const auto eig = hermitian_eigensystem(diag4(0.4, 0.3, 0.2, 0.1));
    CHECK(eig.values[0] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(eig.values[2] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(eig.values[3] == doctest::Approx(0.1).epsilon(1e-14));
    // eigenvectors form a permutation of identity columns
    for (std::size_t j = 0; j < 4; ++j) {
        double col_max = 0.0;
        for (std::size_t i = 0; i < 4; ++i) col_max = std::max(col_max, std::abs(eig.vectors(i, j)));
        CHECK(col_max == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(unitarity_defect(eig.vectors) < 1e-10);
}

TEST_CASE("MEMS(1/2) spectrum is (7/12, 1/3, 1/12, 0)") {
    const auto eig = hermitian_eigensystem(mems(0.5).m);
    CHECK(eig.values[0] == doctest::Approx(7.0 / 12.0).epsilon(1e-13));
    CHECK(eig.values[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(eig.values[2] == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    CHECK(std::abs(eig.values[3]) < 1e-14);
}

TEST_CASE("eigensystem round-trips a constructed spectrum") {
    RandomStream rng = split_stream({11, 0}, 0);
    const Mat4 u = haar_unitary<4>(rng);
    Mat4 h;
    const double lam[4] = {0.7, 0.3, 0.0, 0.0};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx v = 0.0;
            for (std::size_t k = 0; k < 4; ++k) v += u(i, k) * lam[k] * std::conj(u(j, k));
            h(i, j) = v;
        }
    const auto eig = hermitian_eigensystem(h);
    for (std::size_t k = 0; k < 4; ++k) CHECK(eig.values[k] == doctest::Approx(lam[k]).epsilon(1e-10));
    CHECK(reconstruction_error(h, eig) < 1e-10);
}

TEST_CASE("eigensystem properties over random Hermitian matrices") {
    RandomStream rng = split_stream({12, 0}, 0);
    double worst_rec = 0.0, worst_uni = 0.0;
    for (int it = 0; it < 10000; ++it) {
        const Mat4 h = random_hermitian(rng);
        const auto eig = hermitian_eigensystem(h);
        worst_rec = std::max(worst_rec, reconstruction_error(h, eig) / std::max(1.0, h.frobenius_norm()));
        worst_uni = std::max(worst_uni, unitarity_defect(eig.vectors));
        for (std::size_t k = 0; k + 1 < 4; ++k) CHECK(eig.values[k] >= eig.values[k + 1]);
    }
    CHECK(worst_rec < 1e-10);
    CHECK(worst_uni < 1e-10);
}

TEST_CASE("non-Hermitian input is rejected") {
    Mat4 m = diag4(1, 0, 0, 0);
    m(0, 1) = 0.5;  // no matching conjugate
    CHECK_THROWS_AS(hermitian_eigensystem(m), std::invalid_argument);
}

TEST_CASE("kron basics") {
    const Mat2 id = Mat2::identity();
    CHECK(max_abs_diff(kron(id, id), Mat4::identity()) == 0.0);

    // sigma_y (x) sigma_y: anti-diagonal (-1, +1, +1, -1) from entry (0,3)
    const Mat4 yy = kron(kSigmaY, kSigmaY);
    Mat4 expect;
    expect(0, 3) = -1.0;
    expect(1, 2) = 1.0;
    expect(2, 1) = 1.0;
    expect(3, 0) = -1.0;
    CHECK(max_abs_diff(yy, expect) < 1e-15);

    Mat2 da, db;
    da(0, 0) = 2.0;
    da(1, 1) = 3.0;
    db(0, 0) = 5.0;
    db(1, 1) = 7.0;
    CHECK(max_abs_diff(kron(da, db), diag4(10, 14, 15, 21)) < 1e-15);
}

TEST_CASE("partial trace") {
    SUBCASE("Bell state reduces to the maximally mixed qubit") {
        const Mat4 bell = bell_phi_plus();
        for (Subsystem s : {Subsystem::A, Subsystem::B}) {
            const Mat2 r = partial_trace(bell, s);
            CHECK(std::abs(r(0, 0) - 0.5) < 1e-15);
            CHECK(std::abs(r(1, 1) - 0.5) < 1e-15);
            CHECK(std::abs(r(0, 1)) < 1e-15);
        }
    }
    SUBCASE("product state factorizes exactly") {
        RandomStream rng = split_stream({13, 0}, 0);
        const Mat2 ua = haar_unitary<2>(rng);
        const Mat2 ub = haar_unitary<2>(rng);
        Mat2 ra, rb;
        // rank-1 + diagonal mixtures
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                ra(i, j) = 0.7 * ua(i, 0) * std::conj(ua(j, 0)) + 0.3 * ua(i, 1) * std::conj(ua(j, 1));
                rb(i, j) = 0.6 * ub(i, 0) * std::conj(ub(j, 0)) + 0.4 * ub(i, 1) * std::conj(ub(j, 1));
            }
        const Mat4 prod = kron(ra, rb);
        CHECK(max_abs_diff(partial_trace(prod, Subsystem::A), ra) < 1e-14);
        CHECK(max_abs_diff(partial_trace(prod, Subsystem::B), rb) < 1e-14);
    }
    SUBCASE("MEMS(1/2) reductions") {
        const Mat4 rho = mems(0.5).m;
        const Mat2 ra = partial_trace(rho, Subsystem::A);
        const Mat2 rb = partial_trace(rho, Subsystem::B);
        CHECK(std::abs(ra(0, 0) - 2.0 / 3.0) < 1e-15);
        CHECK(std::abs(ra(1, 1) - 1.0 / 3.0) < 1e-15);
        CHECK(std::abs(rb(0, 0) - 1.0 / 3.0) < 1e-15);
        CHECK(std::abs(rb(1, 1) - 2.0 / 3.0) < 1e-15);
        CHECK(std::abs(ra(0, 1)) < 1e-15);
        CHECK(std::abs(rb(0, 1)) < 1e-15);
    }
    SUBCASE("reductions of random states are unit-trace and PSD") {
        RandomStream rng = split_stream({18, 0}, 0);
        for (int it = 0; it < 300; ++it) {
            const Mat4 rho = zhsl_state(rng).m;
            for (Subsystem s : {Subsystem::A, Subsystem::B}) {
                const Mat2 r = partial_trace(rho, s);
                CHECK(std::abs(r.trace() - cplx{1.0}) < 1e-12);
                CHECK(r.hermiticity_gap() < 1e-12);
                CHECK(hermitian_eigensystem(r).values[1] >= -1e-12);
            }
        }
    }
}

TEST_CASE("partial transpose") {
    SUBCASE("involution and trace preservation") {
        RandomStream rng = split_stream({14, 0}, 0);
        for (int it = 0; it < 100; ++it) {
            const Mat4 rho = zhsl_state(rng).m;
            for (Subsystem s : {Subsystem::A, Subsystem::B}) {
                const Mat4 pt = partial_transpose(rho, s);
                CHECK(std::abs(pt.trace() - cplx{1.0}) < 1e-12);
                CHECK(pt.hermiticity_gap() < 1e-12);
                CHECK(max_abs_diff(partial_transpose(pt, s), rho) == 0.0);
            }
        }
    }
    SUBCASE("Bell state has minimum eigenvalue -1/2") {
        const auto eig = hermitian_eigensystem(partial_transpose(bell_phi_plus(), Subsystem::B));
        CHECK(eig.values[3] == doctest::Approx(-0.5).epsilon(1e-13));
    }
    SUBCASE("product states stay positive") {
        RandomStream rng = split_stream({15, 0}, 0);
        for (int it = 0; it < 200; ++it) {
            const Mat2 ua = haar_unitary<2>(rng);
            const Mat2 ub = haar_unitary<2>(rng);
            const double wa = rng.uniform(), wb = rng.uniform();
            Mat2 ra, rb;
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) {
                    ra(i, j) = wa * ua(i, 0) * std::conj(ua(j, 0)) +
                               (1.0 - wa) * ua(i, 1) * std::conj(ua(j, 1));
                    rb(i, j) = wb * ub(i, 0) * std::conj(ub(j, 0)) +
                               (1.0 - wb) * ub(i, 1) * std::conj(ub(j, 1));
                }
            const auto eig = hermitian_eigensystem(partial_transpose(kron(ra, rb), Subsystem::B));
            CHECK(eig.values[3] >= -1e-10);
        }
    }
}

TEST_CASE("spin flip") {
    SUBCASE("Bell state is a fixed point") {
        const Mat4 bell = bell_phi_plus();
        CHECK(max_abs_diff(spin_flip(bell), bell) < 1e-15);
    }
    SUBCASE("maximally mixed state is a fixed point") {
        const Mat4 mm = 0.25 * Mat4::identity();
        CHECK(max_abs_diff(spin_flip(mm), mm) < 1e-15);
    }
    SUBCASE("diagonal order reverses") {
        CHECK(max_abs_diff(spin_flip(diag4(0.4, 0.3, 0.2, 0.1)), diag4(0.1, 0.2, 0.3, 0.4)) <
              1e-15);
    }
    SUBCASE("matches conjugation by sigma_y (x) sigma_y") {
        RandomStream rng = split_stream({16, 0}, 0);
        const Mat4 yy = kron(kSigmaY, kSigmaY);
        for (int it = 0; it < 50; ++it) {
            const Mat4 rho = zhsl_state(rng).m;
            const Mat4 direct = yy * rho.conjugate() * yy;
            CHECK(max_abs_diff(spin_flip(rho), direct) < 1e-14);
        }
    }
    SUBCASE("preserves trace, hermiticity and positivity") {
        RandomStream rng = split_stream({17, 0}, 0);
        for (int it = 0; it < 100; ++it) {
            const Mat4 f = spin_flip(zhsl_state(rng).m);
            CHECK(std::abs(f.trace() - cplx{1.0}) < 1e-12);
            CHECK(f.hermiticity_gap() < 1e-12);
            CHECK(hermitian_eigensystem(f).values[3] >= -1e-10);
        }
    }
    SUBCASE("involution for real-entried states") {
        const Mat4 rho = mems(0.37).m;
        CHECK(max_abs_diff(spin_flip(spin_flip(rho)), rho) < 1e-15);
    }
}
