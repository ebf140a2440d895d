#pragma once

#include <cstdint>

#include "reldiff/correlation.hpp"
#include "reldiff/field.hpp"
#include "reldiff/minkowski.hpp"
#include "reldiff/spectral_density.hpp"

namespace reldiff {

// two-point tensor <F_{mu nu}(x) F_{sg rh}(x')> in the (e,b) pair basis
struct TwoPointTensor {
    FourVector separation;
    PairMatrix value{};
    PairMatrix se{};  // all zero for exact predictions

    double at(int a, int b) const { return value[static_cast<std::size_t>(6 * a + b)]; }
    double se_at(int a, int b) const { return se[static_cast<std::size_t>(6 * a + b)]; }
};

// assemble eta_{ms} G_{nr} - eta_{mr} G_{ns} + eta_{nr} G_{sm} - eta_{ns} G_{mr}
// from a symmetric lower-index matrix G_{mn}
PairMatrix assemble_pair_combination(const std::array<double, 16>& G_lower);

// u-form prediction from a scalar correlation profile:
// G_{mn} = eta_{mn} 2 g'(u) + dx_m dx_n 4 g''(u), u = dx.dx
TwoPointTensor analytic_two_point(const CorrelationProfile& profile, const FourVector& dx);

// Deterministic prediction for a sampled ensemble of the given density,
//   G_{mn}(dx) = -eps^2 * integral Gt(k) k_m k_n cos(k.dx) d^4k,
// reduced to a 2D Gauss-Legendre quadrature (requires a rotation-invariant
// density); the antisymmetrized combination of that matrix is returned
TwoPointTensor spectral_two_point(const SpectralDensity& spec, double epsilon,
                                  const FourVector& dx);

// Monte Carlo average of F(x) (x) F(x') over independent realizations with
// per-entry standard errors; requires n_seeds >= 2
TwoPointTensor empirical_two_point(const SpectralDensity& spec, int n_modes, int n_seeds,
                                   const FourVector& x, const FourVector& xprime,
                                   double epsilon = 0.1, std::uint64_t base_seed = 0);

// full-index-sum contractions used by the profile solve
double contract_trace(const PairMatrix& G);
double contract_direction(const PairMatrix& G, const FourVector& dx);

// transform a pair-basis two-point array by a Lorentz matrix acting on the
// lower tensor indices of both slots
PairMatrix pair_transform(const Mat4& lower_matrix, const PairMatrix& G);

// lower-index transformation matrix matching boost(v, .) on upper components
Mat4 lower_boost_matrix(const std::array<double, 3>& v);

}  // namespace reldiff
