#include "doctest.h"

#include <cmath>
#include <vector>

#include "reldiff/rng.hpp"

using namespace reldiff;

TEST_CASE("streams are deterministic and distinct") {
    RandomStream a(42, 1), b(42, 1), c(42, 2), d(43, 1);
    bool same_ab = true, same_ac = true, same_ad = true;
    std::vector<std::uint64_t> ref;
    for (int i = 0; i < 64; ++i) ref.push_back(a.next_u64());
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = ref[static_cast<std::size_t>(i)];
        same_ab = same_ab && (b.next_u64() == va);
        same_ac = same_ac && (c.next_u64() == va);
        same_ad = same_ad && (d.next_u64() == va);
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
    CHECK_FALSE(same_ad);
}

TEST_CASE("uniform values live in [0,1) with sane moments") {
    RandomStream rs(5, 9);
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rs.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
    CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("normals have unit variance and vanishing skew") {
    RandomStream rs(6, 3);
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = rs.normal();
        m1 += x;
        m2 += x * x;
        m3 += x * x * x;
        m4 += x * x * x * x;
    }
    m1 /= n;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    CHECK(std::abs(m1) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(m2 - 1.0) < 0.02);
    CHECK(std::abs(m3) < 0.03);
    CHECK(std::abs(m4 - 3.0) < 0.1);
}
