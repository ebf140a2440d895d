#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "reldiff/minkowski.hpp"
#include "reldiff/spectral_density.hpp"

namespace reldiff {

// 6x6 symmetric array in the (e,b) pair basis, row-major
using PairMatrix = std::array<double, 36>;

// Per-mode covariance of the field amplitudes at wavevector k (unit spectral
// weight): M_{(mu nu),(sg rh)} = -(eta_{mu sg} k_nu k_rh - eta_{mu rh} k_nu k_sg
// + eta_{nu rh} k_mu k_sg - eta_{nu sg} k_mu k_rh), lower-index k components.
// Positive semidefinite exactly when k lies on the closed forward (or
// backward) cone; every column is annihilated by the contraction
// eps^{ab mu nu} k_a, which is what propagates the Bianchi identity to the
// sampled modes.
PairMatrix mode_covariance(const FourVector& k);

struct FieldMode {
    FourVector k;
    ComplexAntisymTensor z;
    double w = 0.0;
};

// Immutable finite-mode spectral sample of the Gaussian random field,
//   F(x) = sum_n w_n Re[ z_n exp(-i k_n . x) ]
// with the Minkowski inner product in the phase.
class FieldRealization {
  public:
    FieldRealization(std::vector<FieldMode> modes, std::uint64_t seed,
                     std::string spectral_label, double epsilon);

    const std::vector<FieldMode>& modes() const { return modes_; }
    std::uint64_t seed() const { return seed_; }
    const std::string& spectral_label() const { return label_; }
    double epsilon() const { return epsilon_; }

    AntisymTensor operator()(const FourVector& x) const { return evaluate(x); }
    AntisymTensor evaluate(const FourVector& x) const;

  private:
    std::vector<FieldMode> modes_;
    std::uint64_t seed_;
    std::string label_;
    double epsilon_;
    // flattened per-mode data for the evaluation loop: k0..k3, then the six
    // w*Re(z) components, then the six w*Im(z) components
    std::vector<double> flat_;
};

struct SampleDiagnostics {
    std::uint64_t proposals = 0;
    double z_estimate = 0.0;  // integral of the profile over the truncated support
};

// Draw a realization: wavevectors by rejection sampling from the box against
// the profile, amplitudes as circular complex Gaussians with covariance
// M(k_n) via eigendecomposition, uniform weights w_n = epsilon sqrt(Z/N) with
// Z estimated from the sampler acceptance rate so the empirical two-point
// statistics are unbiased for the analytic prediction.
//
// Throws std::invalid_argument when n_modes < 1, std::runtime_error
// "covariance not PSD" when an eigenvalue falls below -1e-10 * trace (the
// profile leaks off the causal support), and "degenerate spectral density"
// when 10^6 consecutive proposals fail.
//
// stream_tag selects a counter-based substream under the same seed; callers
// running many realizations in parallel pass disjoint tags.
FieldRealization sample_realization(const SpectralDensity& spec, int n_modes,
                                    std::uint64_t seed, double epsilon = 0.1,
                                    SampleDiagnostics* diag = nullptr,
                                    std::uint64_t stream_tag = 0);

// max over modes of |eps^{a b mu nu} k_a z_{mu nu}| / (|k| |z|)
double mode_bianchi_residual(const FieldRealization& r);

// max over the free index of the central finite difference of
// eps^{a b mu nu} d_a F_{mu nu} at x; O(h^2)-accurate probe of the exact
// spectral identity
double bianchi_residual(const FieldRealization& r, const FourVector& x, double h);

// text serialization: one JSON header line, then one line per mode with the
// wavevector (4 reals), amplitude (12 reals), and weight
void save_realization(const FieldRealization& r, std::ostream& os);
FieldRealization load_realization(std::istream& is);

}  // namespace reldiff
