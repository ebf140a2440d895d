#pragma once

#include <functional>
#include <string>

#include "reldiff/minkowski.hpp"

namespace reldiff {

inline bool in_forward_cone(const FourVector& k) {
    return k.c[0] >= 0.0 && minkowski_dot(k, k) >= 0.0;
}

// Scalar spectral weight of the random-field modes. Admissible densities are
// nonnegative and vanish off the closed forward cone {k^0 >= 0, k^2 >= 0};
// sampling happens by rejection inside the box 0 <= k^0 <= k_max,
// |k^i| <= k_max.
struct SpectralDensity {
    std::string label;
    std::function<double(const FourVector&)> profile;
    double k_max = 5.0;
    // upper bound of the profile over the box, used by the rejection sampler
    double bound = 1.0;
    // profile depends on k only through (k^0, |k|); enables the 2D quadrature
    // reduction of the two-point prediction
    bool rotation_invariant = true;

    double operator()(const FourVector& k) const { return profile(k); }
};

// exp(-k0/lambda) on the truncated forward cone; the default field used
// throughout the validation suites
SpectralDensity reference_density(double lambda = 1.0, double k_max = 5.0);

// Gaussian bump centered on a spacelike wavevector, support deliberately NOT
// restricted to the cone. Sampling it must fail with "covariance not PSD";
// negative control for the positivity condition.
SpectralDensity spacelike_test_density(double k_max = 3.0);

}  // namespace reldiff
