#include "doctest.h"

#include <cmath>

#include "reldiff/numerics.hpp"
#include "reldiff/rng.hpp"
#include "reldiff/stats.hpp"

using namespace reldiff;

TEST_CASE("welford merge equals bulk accumulation") {
    RandomStream rs(3, 1);
    Welford all, a, b;
    for (int i = 0; i < 5000; ++i) {
        const double x = rs.normal() * 2.0 + 1.0;
        all.add(x);
        (i < 2000 ? a : b).add(x);
    }
    a.merge(b);
    CHECK(a.count() == all.count());
    CHECK(a.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
    CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-10));
    CHECK(all.standard_error() == doctest::Approx(std::sqrt(all.variance() / 5000.0)));
}

TEST_CASE("histogram counts and merge") {
    Histogram h(0.0, 1.0, 10);
    h.add(0.05);
    h.add(0.95);
    h.add(-1.0);
    h.add(2.0);
    CHECK(h.counts[0] == 1.0);
    CHECK(h.counts[9] == 1.0);
    CHECK(h.underflow == 1);
    CHECK(h.overflow == 1);
    CHECK(h.total == 4);
    Histogram g = h;
    g.merge(h);
    CHECK(g.counts[0] == 2.0);
    CHECK(g.total == 8);
}

TEST_CASE("chi-square machinery against a closed-form case") {
    // normal samples binned against the exact normal masses must pass the
    // two-sided test; a shifted target must fail
    RandomStream rs(11, 4);
    Histogram h(-4.0, 4.0, 32);
    const int n = 40000;
    for (int i = 0; i < n; ++i) h.add(rs.normal());

    const auto normal_mass = [&](double shift) {
        std::vector<double> m(h.counts.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double a = (h.edges[i] - shift) / std::sqrt(2.0);
            const double b = (h.edges[i + 1] - shift) / std::sqrt(2.0);
            m[i] = 0.5 * (std::erf(b) - std::erf(a));
        }
        return m;
    };

    const auto ok = chi_square_test(h.counts, normal_mass(0.0), 0.01);
    CHECK(ok.pass);
    CHECK(ok.dof >= 25);
    const auto bad = chi_square_test(h.counts, normal_mass(0.35), 0.01);
    CHECK_FALSE(bad.pass);
    CHECK(bad.statistic > ok.statistic);
}

TEST_CASE("chi-square pools sparse bins") {
    std::vector<double> obs{1, 2, 500, 500, 2, 1};
    std::vector<double> mass{1e-4, 1e-4, 0.4998, 0.4998, 1e-4, 1e-4};
    const auto r = chi_square_test(obs, mass, 0.05);
    CHECK(r.dof < 5);
    CHECK(r.dof >= 1);
}
