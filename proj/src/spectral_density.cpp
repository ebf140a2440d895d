#include "reldiff/spectral_density.hpp"

#include <cmath>

namespace reldiff {

SpectralDensity reference_density(double lambda, double k_max) {
    SpectralDensity s;
    s.label = "reference";
    s.k_max = k_max;
    s.bound = 1.0;
    s.rotation_invariant = true;
    s.profile = [lambda, k_max](const FourVector& k) {
        if (!in_forward_cone(k) || k.c[0] > k_max) return 0.0;
        for (int i = 1; i < 4; ++i)
            if (std::abs(k.c[static_cast<std::size_t>(i)]) > k_max) return 0.0;
        return std::exp(-k.c[0] / lambda);
    };
    return s;
}

SpectralDensity spacelike_test_density(double k_max) {
    SpectralDensity s;
    s.label = "spacelike-test";
    s.k_max = k_max;
    s.bound = 1.0;
    s.rotation_invariant = false;
    s.profile = [](const FourVector& k) {
        const FourVector center{0.0, 0.0, 0.0, 1.5};
        const FourVector d = k - center;
        double n2 = 0.0;
        for (int i = 0; i < 4; ++i) n2 += d.c[static_cast<std::size_t>(i)] * d.c[static_cast<std::size_t>(i)];
        return std::exp(-2.0 * n2);
    };
    return s;
}

}  // namespace reldiff
