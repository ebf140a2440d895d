#include "doctest.h"

#include <cmath>

#include "reldiff/correlation.hpp"
#include "reldiff/two_point.hpp"

using namespace reldiff;

TEST_CASE("kappa2 from the H route on closed forms") {
    SUBCASE("exponential H1 and vanishing H") {
        const auto prof = CorrelationProfile::from_h_functions(
            [](double s) { return std::exp(-s); }, [](double) { return 0.0; }, 1.0);
        CHECK(kappa2_from_h(prof) == doctest::Approx(4.0).epsilon(1e-9));
    }
    SUBCASE("zero profile") {
        const auto prof = CorrelationProfile::from_h_functions(
            [](double) { return 0.0; }, [](double) { return 0.0; }, 1.0);
        CHECK(kappa2_from_h(prof) == doctest::Approx(0.0));
    }
    SUBCASE("undecayed tabulated tail is refused") {
        CorrelationProfile::Table t;
        const int n = 64;
        for (int i = 0; i < n; ++i) {
            const double s = 3.0 * i / (n - 1);
            t.s.push_back(s);
            t.H1.push_back(1.0 / (1.0 + s));  // far from decayed at s = 3
            t.H.push_back(0.0);
        }
        const auto prof = CorrelationProfile::from_table(t, 1.0);
        CHECK_THROWS_WITH_AS(kappa2_from_h(prof), "correlation not resolved", std::runtime_error);
    }
}

TEST_CASE("kappa2 from the g route on closed forms") {
    SUBCASE("gaussian scalar gives -2 sqrt(pi)") {
        CHECK(kappa2_from_g(gaussian_correlation(1.0, 1.0)) ==
              doctest::Approx(-2.0 * std::sqrt(M_PI)).epsilon(1e-9));
    }
    SUBCASE("constant scalar gives zero") {
        const auto flat = CorrelationProfile::from_scalar(
            [](double) { return 2.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }, 1.0);
        CHECK(kappa2_from_g(flat) == doctest::Approx(0.0));
    }
    SUBCASE("profiles without a scalar are rejected") {
        const auto prof = CorrelationProfile::from_h_functions(
            [](double s) { return std::exp(-s); }, [](double) { return 0.0; }, 1.0);
        CHECK_THROWS_AS(kappa2_from_g(prof), std::invalid_argument);
    }
}

TEST_CASE("the two kappa2 routes agree on analytic scalars") {
    for (double amp : {0.5, 1.0, 2.5})
        for (double scale : {0.5, 1.0, 3.0}) {
            const auto prof = gaussian_correlation(amp, scale);
            const double kg = kappa2_from_g(prof);
            const double kh = kappa2_from_h(prof);
            CHECK(std::abs(kg - kh) <= 1e-8 * std::abs(kg));
        }
}

TEST_CASE("derived H functions follow the scalar") {
    const auto prof = gaussian_correlation(1.0, 1.0);
    for (double s : {0.0, 0.3, 1.2}) {
        CHECK(prof.H1(s) == doctest::Approx(2.0 * prof.g1(s * s)).epsilon(1e-14));
        CHECK(prof.H(s) == doctest::Approx(4.0 * s * s * prof.g2(s * s)).epsilon(1e-14));
    }
}

TEST_CASE("covariance growth predictor") {
    const auto prof = CorrelationProfile::from_h_functions(
        [](double s) { return std::exp(-s); }, [](double) { return 0.0; }, 1.0);
    SUBCASE("zero horizon gives zero") { CHECK(predict_covariance_growth(prof, 0.0) == 0.0); }
    SUBCASE("closed form for the exponential profile") {
        for (double tau : {0.3, 1.0, 4.0}) {
            const double want = 2.0 * (tau - 1.0 + std::exp(-tau));
            CHECK(predict_covariance_growth(prof, tau) == doctest::Approx(want).epsilon(1e-9));
        }
    }
    SUBCASE("long horizon approaches kappa2/2 per unit clock") {
        const double tau = 100.0;
        const double slope = predict_covariance_growth(prof, tau) / tau;
        CHECK(slope == doctest::Approx(0.5 * kappa2_from_h(prof)).epsilon(0.01));
    }
    SUBCASE("nondecreasing when the integrand is nonnegative") {
        double prev = 0.0;
        for (double tau = 0.25; tau <= 4.0; tau += 0.25) {
            const double cur = predict_covariance_growth(prof, tau);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("profile tables validate their grids") {
    CorrelationProfile::Table t;
    t.s = {0.0, 1.0, 0.5};
    t.H1 = {0, 0, 0};
    t.H = {0, 0, 0};
    CHECK_THROWS_AS(CorrelationProfile::from_table(t, 1.0), std::invalid_argument);
    t.s = {0.5, 1.0, 1.5};
    CHECK_THROWS_AS(CorrelationProfile::from_table(t, 1.0), std::invalid_argument);
}

TEST_CASE("quadrature profiles of the reference field match the frozen oracle") {
    const SpectralDensity spec = reference_density();
    std::vector<double> grid;
    for (int i = 0; i <= 26; ++i) grid.push_back(1.3 * i / 26.0);
    const CorrelationProfile prof = h_profiles_spectral(spec, {1, 0, 0, 0}, grid, 0.1);
    const auto& t = prof.table();
    // frozen scipy values at s = 0.7 and s = 1.3 (eps = 0.1)
    CHECK(t.H1[14] == doctest::Approx(-2.76962927068815e-01).epsilon(1e-7));
    CHECK(t.H[14] == doctest::Approx(1.66177756241289e+00).epsilon(1e-7));
    CHECK(t.H1[26] == doctest::Approx(6.02438685456009e-02).epsilon(1e-7));
    CHECK(t.H[26] == doctest::Approx(-3.61463211273606e-01).epsilon(1e-7));
}

TEST_CASE("field-extracted profiles agree with the quadrature route") {
    const SpectralDensity spec = reference_density();
    std::vector<double> grid;
    for (int i = 0; i <= 16; ++i) grid.push_back(2.0 * i / 16.0);

    ProfileEstimationOptions opt;
    opt.n_modes = 96;
    opt.n_seeds = 600;
    opt.epsilon = 0.1;
    opt.base_seed = 5;
    const CorrelationProfile mc = h_profiles_from_field(spec, {1, 0, 0, 0}, grid, opt);
    const CorrelationProfile quad = h_profiles_spectral(spec, {1, 0, 0, 0}, grid, 0.1);
    const auto& tm = mc.table();
    const auto& tq = quad.table();
    for (std::size_t i = 0; i < tm.s.size(); ++i) {
        CHECK(std::abs(tm.H1[i] - tq.H1[i]) <= 5.0 * std::max(tm.se_H1[i], 1e-12));
        CHECK(std::abs(tm.H[i] - tq.H[i]) <= 5.0 * std::max(tm.se_H[i], 1e-12));
    }

    SUBCASE("boosted worldline estimator stays consistent with quadrature") {
        const FourVector p = boost({-0.4, 0.0, 0.0}, {1, 0, 0, 0});
        ProfileEstimationOptions bopt = opt;
        bopt.n_seeds = 400;
        const CorrelationProfile bmc = h_profiles_from_field(spec, p, grid, bopt);
        // separate worldline: quadrature along the boosted direction
        std::vector<double> grid2 = grid;
        CorrelationProfile bquad = h_profiles_spectral(spec, p, grid2, 0.1);
        const auto& bm = bmc.table();
        const auto& bq = bquad.table();
        for (std::size_t i = 0; i < bm.s.size(); ++i) {
            CHECK(std::abs(bm.H1[i] - bq.H1[i]) <= 5.0 * std::max(bm.se_H1[i], 1e-12));
            CHECK(std::abs(bm.H[i] - bq.H[i]) <= 5.0 * std::max(bm.se_H[i], 1e-12));
        }
    }
}

TEST_CASE("zero field extracts identically vanishing profiles") {
    const SpectralDensity spec = reference_density();
    std::vector<double> grid{0.0, 0.5, 1.0, 1.5};
    ProfileEstimationOptions opt;
    opt.n_modes = 32;
    opt.n_seeds = 8;
    opt.epsilon = 0.0;
    const CorrelationProfile prof = h_profiles_from_field(spec, {1, 0, 0, 0}, grid, opt);
    for (double v : prof.table().H1) CHECK(v == 0.0);
    for (double v : prof.table().H) CHECK(v == 0.0);
    CHECK(kappa2_from_h(prof) == 0.0);
}

TEST_CASE("off-shell worldline momenta are rejected") {
    const SpectralDensity spec = reference_density();
    std::vector<double> grid{0.0, 0.5, 1.0};
    ProfileEstimationOptions opt;
    CHECK_THROWS_AS(h_profiles_from_field(spec, {2.0, 0, 0, 0}, grid, opt),
                    std::invalid_argument);
}

TEST_CASE("scalar profile of the reference density") {
    const SpectralDensity spec = reference_density();
    const CorrelationProfile scalar = scalar_profile_from_density(spec, 0.1);
    // frozen scipy value of the closed-form g-route constant
    CHECK(kappa2_from_g(scalar) == doctest::Approx(-1.7670751795710173).epsilon(1e-6));
    // on-axis consistency: d^2/dt^2 g(t^2) = 2g' + 4t^2 g'' equals the
    // quadrature H1 + H combination at the same separation
    std::vector<double> grid;
    for (int i = 0; i <= 14; ++i) grid.push_back(0.7 * i / 14.0);
    const CorrelationProfile quad = h_profiles_spectral(spec, {1, 0, 0, 0}, grid, 0.1);
    const auto& tq = quad.table();
    const double u = 0.49;
    const double gamma00 = 2.0 * scalar.g1(u) + 4.0 * u * scalar.g2(u);
    CHECK(gamma00 == doctest::Approx(tq.H1[14] + tq.H[14]).epsilon(1e-6));
}
