#include "doctest.h"

#include <cmath>

#include "reldiff/minkowski.hpp"
#include "reldiff/rng.hpp"

using namespace reldiff;

TEST_CASE("minkowski dot on the signature examples") {
    CHECK(minkowski_dot({1, 0, 0, 0}, {1, 0, 0, 0}) == doctest::Approx(1.0));
    CHECK(minkowski_dot({1, 1, 0, 0}, {1, 1, 0, 0}) == doctest::Approx(0.0));
    CHECK(minkowski_dot({2, 1, 0, 0}, {3, 0, 1, 0}) == doctest::Approx(6.0));
}

TEST_CASE("minkowski dot is symmetric and bilinear") {
    RandomStream rs(7, 0);
    for (int i = 0; i < 200; ++i) {
        FourVector a{rs.normal(), rs.normal(), rs.normal(), rs.normal()};
        FourVector b{rs.normal(), rs.normal(), rs.normal(), rs.normal()};
        FourVector c{rs.normal(), rs.normal(), rs.normal(), rs.normal()};
        const double al = rs.normal(), be = rs.normal();
        CHECK(minkowski_dot(a, b) == doctest::Approx(minkowski_dot(b, a)));
        const FourVector lin = a * al + b * be;
        CHECK(minkowski_dot(lin, c) ==
              doctest::Approx(al * minkowski_dot(a, c) + be * minkowski_dot(b, c)).epsilon(1e-12));
    }
}

TEST_CASE("lorentz force examples") {
    SUBCASE("zero field") {
        const FourVector f = lorentz_force({}, {2.0, 0.3, -0.4, 1.0});
        for (int i = 0; i < 4; ++i) CHECK(f[static_cast<std::size_t>(i)] == 0.0);
    }
    SUBCASE("pure electric field on a particle at rest") {
        AntisymTensor F;
        F.e = {2.5, 0.0, 0.0};
        const double mc = 1.7;
        const FourVector f = lorentz_force(F, {mc, 0, 0, 0});
        CHECK(f[0] == doctest::Approx(0.0));
        CHECK(f[1] == doctest::Approx(2.5 * mc));
        CHECK(f[2] == doctest::Approx(0.0));
        CHECK(f[3] == doctest::Approx(0.0));
    }
    SUBCASE("force is Minkowski-orthogonal to the momentum") {
        RandomStream rs(11, 0);
        for (int i = 0; i < 500; ++i) {
            AntisymTensor F;
            for (int j = 0; j < 3; ++j) {
                F.e[static_cast<std::size_t>(j)] = rs.normal();
                F.b[static_cast<std::size_t>(j)] = rs.normal();
            }
            FourVector p{std::abs(rs.normal()) + 2.0, rs.normal(), rs.normal(), rs.normal()};
            const FourVector f = lorentz_force(F, p);
            const double scale = std::abs(minkowski_dot(p, p)) + 1.0;
            CHECK(std::abs(minkowski_dot(f, p)) < 1e-12 * scale * 10);
        }
    }
}

TEST_CASE("mixed matrix agrees with the force contraction") {
    RandomStream rs(13, 0);
    for (int i = 0; i < 100; ++i) {
        AntisymTensor F;
        for (int j = 0; j < 3; ++j) {
            F.e[static_cast<std::size_t>(j)] = rs.normal();
            F.b[static_cast<std::size_t>(j)] = rs.normal();
        }
        FourVector p{rs.normal(), rs.normal(), rs.normal(), rs.normal()};
        const FourVector a = lorentz_force(F, p);
        const FourVector b = mixed_matrix(F).apply(p);
        for (int j = 0; j < 4; ++j)
            CHECK(a[static_cast<std::size_t>(j)] == doctest::Approx(b[static_cast<std::size_t>(j)]).epsilon(1e-14));
    }
}

TEST_CASE("antisym tensor component lookup matches the packing") {
    AntisymTensor F;
    F.e = {1.0, 2.0, 3.0};
    F.b = {4.0, 5.0, 6.0};
    CHECK(F.lower(0, 1) == 1.0);
    CHECK(F.lower(1, 0) == -1.0);
    CHECK(F.lower(3, 2) == 4.0);
    CHECK(F.lower(1, 3) == 5.0);
    CHECK(F.lower(2, 1) == 6.0);
    CHECK(F.lower(1, 2) == -6.0);
    CHECK(F.lower(2, 2) == 0.0);
}

TEST_CASE("boost basics") {
    const FourVector a{1.3, 0.2, -0.7, 0.5};
    SUBCASE("zero velocity is the identity") {
        const FourVector b = boost({0, 0, 0}, a);
        for (int i = 0; i < 4; ++i) CHECK(b[static_cast<std::size_t>(i)] == a[static_cast<std::size_t>(i)]);
    }
    SUBCASE("boost then inverse boost") {
        const std::array<double, 3> v{0.3, -0.2, 0.5};
        const std::array<double, 3> mv{-0.3, 0.2, -0.5};
        const FourVector b = boost(mv, boost(v, a));
        for (int i = 0; i < 4; ++i)
            CHECK(b[static_cast<std::size_t>(i)] ==
                  doctest::Approx(a[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
    SUBCASE("superluminal velocity is rejected") {
        CHECK_THROWS_AS(boost({0.8, 0.8, 0.0}, a), std::domain_error);
    }
}

TEST_CASE("boost preserves the Minkowski product") {
    RandomStream rs(17, 0);
    for (int i = 0; i < 1000; ++i) {
        std::array<double, 3> v{};
        double v2 = 2.0;
        while (v2 >= 0.9409) {
            for (auto& c : v) c = rs.uniform(-0.97, 0.97);
            v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        }
        FourVector a{rs.normal(), rs.normal(), rs.normal(), rs.normal()};
        FourVector b{rs.normal(), rs.normal(), rs.normal(), rs.normal()};
        const double before = minkowski_dot(a, b);
        const double after = minkowski_dot(boost(v, a), boost(v, b));
        CHECK(std::abs(after - before) <= 1e-10 * (std::abs(before) + 1.0));
    }
}

TEST_CASE("matrix exponential") {
    SUBCASE("pure magnetic generator is a rotation") {
        AntisymTensor F;
        F.b = {0.0, 0.0, 1.0};
        const double angle = 0.37;
        const Mat4 R = expm(mixed_matrix(F) * angle);
        // F^1_2 = b3 rotates the (1,2) plane
        CHECK(R.at(1, 1) == doctest::Approx(std::cos(angle)).epsilon(1e-12));
        CHECK(R.at(1, 2) == doctest::Approx(std::sin(angle)).epsilon(1e-12));
        CHECK(R.at(2, 1) == doctest::Approx(-std::sin(angle)).epsilon(1e-12));
        CHECK(R.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("pure electric generator is a boost with cosh/sinh entries") {
        AntisymTensor F;
        F.e = {1.0, 0.0, 0.0};
        const double eta = 0.8;
        const Mat4 B = expm(mixed_matrix(F) * eta);
        CHECK(B.at(0, 0) == doctest::Approx(std::cosh(eta)).epsilon(1e-12));
        CHECK(B.at(0, 1) == doctest::Approx(std::sinh(eta)).epsilon(1e-12));
    }
    SUBCASE("exponential of the field generator preserves p^2") {
        RandomStream rs(19, 0);
        for (int i = 0; i < 200; ++i) {
            AntisymTensor F;
            for (int j = 0; j < 3; ++j) {
                F.e[static_cast<std::size_t>(j)] = rs.normal();
                F.b[static_cast<std::size_t>(j)] = rs.normal();
            }
            const Mat4 E = expm(mixed_matrix(F) * rs.uniform(-0.5, 0.5));
            FourVector p{std::abs(rs.normal()) + 1.5, rs.normal(), rs.normal(), rs.normal()};
            const FourVector q = E.apply(p);
            CHECK(std::abs(minkowski_dot(q, q) - minkowski_dot(p, p)) <
                  1e-12 * (std::abs(minkowski_dot(p, p)) + 1.0));
        }
    }
}

TEST_CASE("epsilon symbol") {
    CHECK(epsilon4(0, 1, 2, 3) == 1);
    CHECK(epsilon4(1, 0, 2, 3) == -1);
    CHECK(epsilon4(0, 0, 2, 3) == 0);
    CHECK(epsilon4(3, 2, 1, 0) == 1);
}
