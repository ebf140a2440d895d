#include "doctest.h"

#include <cmath>

#include "reldiff/rng.hpp"
#include "reldiff/two_point.hpp"

using namespace reldiff;

namespace {

// frozen independent quadrature values for the reference density at
// eps = 0.1 (adaptive 1D/2D integration of the spectral moments)
constexpr double kEEDiag07 = -1.10785170827526e+00;
constexpr double kBBDiag07 = -5.53925854137631e-01;
constexpr double kEEDiag13 = 2.40975474182404e-01;
constexpr double kE1E1_t09_r04 = -8.41008185115777e-01;
constexpr double kE3E3_t09_r04 = -9.17745810565306e-01;
constexpr double kB2B2_t09_r04 = -3.82135279833124e-01;
constexpr double kE1B2_t09_r04 = -1.39848675874914e-01;

}  // namespace

TEST_CASE("u-form prediction from a scalar profile") {
    SUBCASE("constant g gives the zero tensor") {
        const auto flat = CorrelationProfile::from_scalar(
            [](double) { return 3.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }, 1.0);
        const TwoPointTensor T = analytic_two_point(flat, {0.4, 0.2, -0.1, 0.8});
        for (double v : T.value) CHECK(v == 0.0);
    }
    SUBCASE("zero separation reduces to the pure metric combination") {
        const double c1 = 0.37;
        const auto prof = CorrelationProfile::from_scalar(
            [](double) { return 0.0; }, [c1](double) { return c1; },
            [](double) { return 11.0; },  // g'' present but killed by dx = 0
            1.0);
        const TwoPointTensor T = analytic_two_point(prof, {0, 0, 0, 0});
        // ee diagonal: G_{0j;0j} = eta00 G_jj + eta_jj G_00 = -2h1 - 2h1 ... with
        // G_mn = eta_mn h1: entries follow eta_ms eta_nr pattern
        const double h1 = 2.0 * c1;
        for (int a = 0; a < 3; ++a) CHECK(T.at(a, a) == doctest::Approx(-2.0 * h1));
        for (int a = 3; a < 6; ++a) CHECK(T.at(a, a) == doctest::Approx(2.0 * h1));
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
                if (a != b) CHECK(T.at(a, b) == doctest::Approx(0.0));
    }
    SUBCASE("index-pair swap with reflected separation is a symmetry") {
        const auto prof = gaussian_correlation(1.3, 0.8);
        RandomStream rs(5, 2);
        for (int i = 0; i < 20; ++i) {
            const FourVector dx{rs.normal(), rs.normal(), rs.normal(), rs.normal()};
            const TwoPointTensor A = analytic_two_point(prof, dx);
            const TwoPointTensor B = analytic_two_point(prof, dx * -1.0);
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b)
                    CHECK(A.at(a, b) == doctest::Approx(B.at(b, a)).epsilon(1e-12));
        }
    }
}

TEST_CASE("spectral quadrature prediction matches the frozen oracle values") {
    const SpectralDensity spec = reference_density();
    SUBCASE("timelike separations on the axis") {
        const TwoPointTensor T = spectral_two_point(spec, 0.1, {0.7, 0, 0, 0});
        for (int a = 0; a < 3; ++a)
            CHECK(T.at(a, a) == doctest::Approx(kEEDiag07).epsilon(1e-8));
        for (int a = 3; a < 6; ++a)
            CHECK(T.at(a, a) == doctest::Approx(kBBDiag07).epsilon(1e-8));
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
                if (a != b) CHECK(std::abs(T.at(a, b)) < 1e-10);
        const TwoPointTensor T13 = spectral_two_point(spec, 0.1, {1.3, 0, 0, 0});
        CHECK(T13.at(0, 0) == doctest::Approx(kEEDiag13).epsilon(1e-8));
    }
    SUBCASE("mixed separation along z") {
        const TwoPointTensor T = spectral_two_point(spec, 0.1, {0.9, 0, 0, 0.4});
        CHECK(T.at(0, 0) == doctest::Approx(kE1E1_t09_r04).epsilon(1e-8));
        CHECK(T.at(2, 2) == doctest::Approx(kE3E3_t09_r04).epsilon(1e-8));
        CHECK(T.at(4, 4) == doctest::Approx(kB2B2_t09_r04).epsilon(1e-8));
        CHECK(T.at(0, 4) == doctest::Approx(kE1B2_t09_r04).epsilon(1e-8));
    }
    SUBCASE("separation reflection swaps the index pairs") {
        const FourVector dx{0.6, 0.3, -0.5, 0.2};
        const TwoPointTensor A = spectral_two_point(spec, 0.1, dx);
        const TwoPointTensor B = spectral_two_point(spec, 0.1, dx * -1.0);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
                CHECK(A.at(a, b) == doctest::Approx(B.at(b, a)).epsilon(1e-9));
    }
}

TEST_CASE("empirical two-point agrees with the quadrature prediction") {
    const SpectralDensity spec = reference_density();
    const FourVector x{0.8, 0.3, -0.2, 0.5};
    const TwoPointTensor emp = empirical_two_point(spec, 64, 1500, x, {0, 0, 0, 0}, 0.1, 11);
    const TwoPointTensor ana = spectral_two_point(spec, 0.1, x);
    double worst = 0.0;
    for (int i = 0; i < 36; ++i) {
        const double se = std::max(emp.se[static_cast<std::size_t>(i)], 1e-300);
        worst = std::max(worst, std::abs(emp.value[static_cast<std::size_t>(i)] -
                                         ana.value[static_cast<std::size_t>(i)]) / se);
    }
    CHECK(worst <= 5.0);
}

TEST_CASE("coincident-point diagonal entries are nonnegative variances") {
    const SpectralDensity spec = reference_density();
    const FourVector x{0.4, 0.1, 0.0, -0.2};
    const TwoPointTensor emp = empirical_two_point(spec, 64, 400, x, x, 0.1, 3);
    for (int a = 0; a < 6; ++a) CHECK(emp.at(a, a) >= -5.0 * emp.se_at(a, a));
}

TEST_CASE("standard errors shrink like the square root of the seed count") {
    const SpectralDensity spec = reference_density();
    const FourVector x{0.5, 0, 0, 0.3};
    const TwoPointTensor a = empirical_two_point(spec, 48, 500, x, {0, 0, 0, 0}, 0.1, 101);
    const TwoPointTensor b = empirical_two_point(spec, 48, 1000, x, {0, 0, 0, 0}, 0.1, 101);
    double ra = 0.0, rb = 0.0;
    for (int i = 0; i < 36; ++i) {
        ra += a.se[static_cast<std::size_t>(i)];
        rb += b.se[static_cast<std::size_t>(i)];
    }
    CHECK(ra / rb == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("mode covariance transforms covariantly under boosts") {
    RandomStream rs(31, 0);
    const Mat4 Llow = lower_boost_matrix({0.4, -0.2, 0.1});
    for (int i = 0; i < 50; ++i) {
        FourVector k{0, rs.uniform(-3, 3), rs.uniform(-3, 3), rs.uniform(-3, 3)};
        k.c[0] = std::sqrt(k.c[1] * k.c[1] + k.c[2] * k.c[2] + k.c[3] * k.c[3]) + rs.uniform(0, 2);
        const PairMatrix direct = mode_covariance(boost({0.4, -0.2, 0.1}, k));
        const PairMatrix moved = pair_transform(Llow, mode_covariance(k));
        double scale = 0.0;
        for (double v : direct) scale = std::max(scale, std::abs(v));
        for (int j = 0; j < 36; ++j)
            CHECK(std::abs(direct[static_cast<std::size_t>(j)] - moved[static_cast<std::size_t>(j)]) <=
                  1e-10 * scale);
    }
}

TEST_CASE("quadrature stays accurate at larger phases") {
    const SpectralDensity spec = reference_density();
    const TwoPointTensor T = spectral_two_point(spec, 0.1, {3.0, 0, 0, 0});
    CHECK(T.at(1, 1) == doctest::Approx(1.18879830106123e-01).epsilon(1e-8));
    CHECK(T.at(3, 3) == doctest::Approx(7.92532200707485e-02).epsilon(1e-8));
}
