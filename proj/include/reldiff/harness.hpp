#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reldiff/correlation.hpp"
#include "reldiff/diffusion.hpp"
#include "reldiff/dynamics.hpp"
#include "reldiff/spectral_density.hpp"
#include "reldiff/stats.hpp"

namespace reldiff {

struct FieldConfig {
    std::string density = "reference";  // reference | spacelike-test
    double lambda = 1.0;
    double k_max = 5.0;
    double epsilon = 0.1;
    int n_modes = 4096;

    SpectralDensity make() const;
};

struct ExperimentConfig {
    std::string name = "experiment";
    FieldConfig field;
    int particles = 1000;
    Clock clock = Clock::Proper;
    double horizon = 10.0;
    double step = 0.01;
    int checkpoints = 20;
    std::uint64_t master_seed = 0;
    std::array<double, 3> initial_p{0.0, 0.0, 0.0};
    ParticleParams particle{};
    std::uint64_t experiment_ordinal = 0;  // separates seed streams between experiments

    void validate() const;  // counts >= 1, horizon/step >= 10
};

// checkpointed ensemble moments; second-moment order 11,22,33,12,13,23
struct MomentTable {
    std::vector<double> s;
    std::array<std::vector<double>, 3> mean_p, se_p;
    std::array<std::vector<double>, 6> mean_pp, se_pp;
    std::vector<double> mean_p0, se_p0;
    std::vector<double> mean_p0p0, se_p0p0;

    std::size_t checkpoints() const { return s.size(); }
};

struct MomentReport {
    MomentTable table;
    Histogram hist_pabs;  // |p| at the final checkpoint
    Histogram hist_p0;    // p0 at the final checkpoint
    int n_particles = 0;
    int failed_trajectories = 0;
    bool invalid = false;  // propagation failures above 0.1 %

    void write_moments_csv(std::ostream& os) const;
};

void write_histogram_csv(const Histogram& h, std::ostream& os);

struct RunContext {
    int workers = 1;
};

// Quenched per-particle disorder: every particle propagates through its own
// independently sampled field realization; moments accumulate at uniform
// clock checkpoints. Trajectories violating the integrator tolerance are
// counted; more than 0.1 % marks the report invalid.
MomentReport run_field_ensemble(const ExperimentConfig& cfg, const RunContext& ctx);

struct DiffusionRunConfig {
    std::string name = "diffusion";
    DiffusionParams params;
    int walkers = 10000;
    double horizon = 10.0;
    double step = 1e-3;
    int checkpoints = 20;
    std::uint64_t master_seed = 0;
    std::array<double, 3> initial_p{0.0, 0.0, 0.0};
    std::uint64_t experiment_ordinal = 1;
    // optional monotone clock map lambda(s) applied to the walker clock; the
    // step fed to the SDE over [s, s+ds] is lambda(s+ds) - lambda(s)
    std::function<double(double)> clock_map;

    void validate() const;
};

MomentReport run_diffusion_ensemble(const DiffusionRunConfig& cfg, const RunContext& ctx);

struct TolerancePolicy {
    double z_max = 5.0;
    double systematic_rel = 0.0;  // extra band, relative to the larger moment
    double scale_floor = 1e-12;
};

struct MomentComparison {
    std::string moment;
    double s = 0.0;
    double a = 0.0, b = 0.0;
    double combined_se = 0.0;
    double z = 0.0;
    bool pass = true;
};

struct CompareResult {
    bool pass = true;
    double worst_z = 0.0;
    std::string worst_moment;
    std::vector<MomentComparison> rows;  // every compared moment
};

// per-moment z-scores with combined standard errors plus the systematic
// band; throws std::invalid_argument on mismatched checkpoint grids
CompareResult compare_reports(const MomentReport& a, const MomentReport& b,
                              const TolerancePolicy& policy);

// Juttner p0-marginal density p0 sqrt(p0^2 - m^2c^2) exp(-beta c p0),
// normalized bin masses for a histogram, by quadrature
std::vector<double> juttner_bin_masses(const Histogram& h, const ParticleParams& pp,
                                       double beta_c);
// mean of p0 under the Juttner density, by quadrature
double juttner_mean_p0(const ParticleParams& pp, double beta_c);

struct EquilibrationConfig {
    double kappa2 = 2.0;
    ParticleParams particle{};
    int walkers = 100000;
    double step = 1e-3;
    double horizon_cap = 60.0;
    int bins = 40;
    double hist_lo = 1.0, hist_hi = 9.0;  // p0 range of the final histogram
    std::uint64_t master_seed = 0;
    std::uint64_t experiment_ordinal = 2;
    double level = 0.01;
};

struct EquilibrationResult {
    Histogram hist_p0;
    ChiSquareResult chi_target;   // against beta^-1 = m c^2
    ChiSquareResult chi_control;  // against beta^-1 = 2 m c^2 (must fail)
    double elapsed = 0.0;
    bool mixed = false;  // mixing heuristic satisfied before the cap
    bool pass = false;   // target passes and control fails
};

// x0-clock JuttnerLab walkers from rest until the chi-square distance to the
// target stabilizes (relative change over the trailing 20 % below 10 %), then
// a two-sided chi-square test of the final p0 histogram
EquilibrationResult run_juttner_equilibration(const EquilibrationConfig& cfg,
                                              const RunContext& ctx);

struct LabVsProperConfig {
    double kappa2 = 1.0;
    ParticleParams particle{};
    int walkers = 20000;
    double step = 1e-3;
    double horizon = 8.0;
    int checkpoints = 16;
    std::uint64_t master_seed = 0;
    std::uint64_t experiment_ordinal = 3;
    bool swap_kinds = false;  // negative control
};

struct LabVsProperResult {
    MomentReport lab;     // JuttnerLab kind
    MomentReport proper;  // SchayDudleyProper kind
    double juttner_mean = 0.0;
    bool lab_saturated = false;  // final <p0> within band of the Juttner mean
    bool proper_grew = false;    // final <p0> above 10 mc
    bool pass = false;
};

LabVsProperResult lab_vs_proper_discrepancy(const LabVsProperConfig& cfg, const RunContext& ctx);

// FNV-1a 64-bit checksum of a file, hex encoded
std::string file_checksum(const std::string& path);

}  // namespace reldiff
