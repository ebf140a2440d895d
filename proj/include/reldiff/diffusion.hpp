#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "reldiff/dynamics.hpp"
#include "reldiff/minkowski.hpp"

namespace reldiff {

// The two momentum-space diffusion generators, as differential operators
//   D_H f = (d^{jl} m^2c^2 + p^j p^l) d_j d_l f + 3 p^l d_l f
//   D_B f = D_H f - (p^0/(mc)) p^j d_j f
// D_H generates the unique Lorentz-invariant mass-shell diffusion; the extra
// drift of D_B is the friction that equilibrates the laboratory-time process
// to the Juttner density at inverse temperature 1/(m c^2).
enum class DiffusionKind { SchayDudleyProper, JuttnerLab };

struct DiffusionParams {
    double kappa2 = 1.0;  // diffusion constant, >= 0
    ParticleParams particle{};
    DiffusionKind kind = DiffusionKind::SchayDudleyProper;
};

inline void validate_diffusion_params(const DiffusionParams& dp) {
    if (dp.kappa2 < 0.0) throw std::invalid_argument("DiffusionParams: kappa2 must be >= 0");
    validate_particle_params(dp.particle);
}

struct MomentumState {
    std::array<double, 3> p{0.0, 0.0, 0.0};
    std::optional<FourVector> x;  // transported position (proper-time kind only)

    double p0(const ParticleParams& pp) const {
        const double m2c2 = pp.m * pp.m * pp.c * pp.c;
        return std::sqrt(m2c2 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    }
};

// uniform cubic grid in momentum space for finite-difference generator checks
struct MomentumGrid {
    std::array<double, 3> origin{0.0, 0.0, 0.0};  // point at index (0,0,0)
    double h = 0.1;
    std::array<int, 3> n{9, 9, 9};

    std::size_t size() const {
        return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) *
               static_cast<std::size_t>(n[2]);
    }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n[1]) +
                static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(n[2]) +
               static_cast<std::size_t>(k);
    }
    std::array<double, 3> point(int i, int j, int k) const {
        return {origin[0] + h * i, origin[1] + h * j, origin[2] + h * k};
    }
    bool interior(int i, int j, int k) const {
        return i > 0 && j > 0 && k > 0 && i < n[0] - 1 && j < n[1] - 1 && k < n[2] - 1;
    }
};

// central-difference application of the generator to a grid function at an
// interior grid point; O(h^2). Throws std::domain_error on boundary points.
double generator_apply(DiffusionKind kind, const MomentumGrid& grid,
                       std::span<const double> f, std::array<int, 3> idx,
                       const ParticleParams& pp);

// Dense matrix of D_H in divergence form, L = diag(p0) B with
// B = -sum_{jl} D_j^T diag(a^{jl}/p0) D_l, so diag(1/p0) L is symmetric by
// construction; consistent with D_H away from the boundary layers.
std::vector<double> weighted_generator_matrix(const MomentumGrid& grid,
                                              const ParticleParams& pp);

// Ito drift of the SDE realizing (kappa2/2) times the generator
std::array<double, 3> sde_drift(DiffusionKind kind, const std::array<double, 3>& p,
                                const DiffusionParams& dp);

// diffusion square root: sigma = kappa (mc I + (p0 - mc) phat phat^T), so
// sigma sigma^T = kappa^2 (m^2c^2 I + p p^T)
std::array<double, 9> sde_diffusion_root(const std::array<double, 3>& p,
                                         const DiffusionParams& dp);

// One Euler-Maruyama step. ds is the calling clock's increment: the proper
// time for SchayDudleyProper, the laboratory time for JuttnerLab (where the
// generator is time-changed by mc^2/p0, applied with the pre-step p0). The
// post-step p0 is recomputed from the mass shell. For the proper-time kind a
// transported position x advances by (p^mu/mc) ds with the pre-step momentum.
MomentumState sde_step(const MomentumState& st, const DiffusionParams& dp, double ds,
                       const std::array<double, 3>& noise);

// Stationary flux of the JuttnerLab generator evaluated analytically at the
// density rho(p) = (p0)^alpha exp(-beta c p0) (natural-unit defaults
// alpha = -1, beta c = 1/(mc)): J^j = d_l(a^{jl} rho) - b^j rho with
// a = m^2c^2 I + p p^T and b the generator drift. Identically zero exactly at
// alpha = -1, beta = 1/(mc^2).
std::array<double, 3> stationary_flux(const std::array<double, 3>& p, const DiffusionParams& dp,
                                      double alpha = -1.0, double beta_c = -1.0);

}  // namespace reldiff
