#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "reldiff/minkowski.hpp"
#include "reldiff/spectral_density.hpp"

namespace reldiff {

// Scalar correlation data of the field along a timelike worldline. Carries
// either an analytic scalar g(u) of the invariant separation u = dx^2 (with
// first and second derivatives), direct profile functions H1(s), H(s), or a
// tabulated profile on an increasing grid starting at s = 0. When a scalar is
// present the profiles are derived from it: H1(s) = 2 g'(s^2),
// H(s) = 4 s^2 g''(s^2).
class CorrelationProfile {
  public:
    struct Table {
        std::vector<double> s;
        std::vector<double> H1;
        std::vector<double> H;
        std::vector<double> se_H1;  // empty when exact
        std::vector<double> se_H;
    };

    static CorrelationProfile from_scalar(std::function<double(double)> g,
                                          std::function<double(double)> g1,
                                          std::function<double(double)> g2,
                                          double decay_scale);
    static CorrelationProfile from_h_functions(std::function<double(double)> H1,
                                               std::function<double(double)> H,
                                               double decay_scale);
    static CorrelationProfile from_table(Table t, double decay_scale);

    bool has_scalar() const { return bool(g_); }
    bool has_table() const { return bool(table_); }

    double g(double u) const;
    double g1(double u) const;
    double g2(double u) const;

    // profile values; tabulated profiles interpolate linearly
    double H1(double s) const;
    double H(double s) const;

    const Table& table() const;
    double decay_scale() const { return decay_scale_; }

    // tabulate H1/H on n points over [0, s_max]
    Table tabulate(double s_max, int n) const;

  private:
    CorrelationProfile() = default;
    std::function<double(double)> g_, g1_, g2_;
    std::function<double(double)> h1_fn_, h_fn_;
    std::optional<Table> table_;
    double decay_scale_ = 1.0;
};

// g(u) = amp * exp(-u / u_scale); the workhorse analytic profile
CorrelationProfile gaussian_correlation(double amp = 1.0, double u_scale = 1.0);

// kappa^2 = 2 * integral_0^inf (2 H1(s) + H(s)) ds.
// Tabulated profiles integrate by trapezoid over their grid and require the
// decayed tail |2H1+H|(s_end) < 1% of the max; otherwise throws
// std::runtime_error("correlation not resolved"). The value keeps its sign.
double kappa2_from_h(const CorrelationProfile& profile);

// kappa^2 = 2 * integral_0^inf u^{-1/2} g'(u) du, evaluated as
// 4 * integral_0^inf g'(s^2) ds (the substitution u = s^2 regularizes the
// endpoint). Requires the analytic scalar; throws
// std::runtime_error("profile not admissible") when the tail does not settle.
double kappa2_from_g(const CorrelationProfile& profile);

// time-dependent coefficient of the momentum-space generator before the
// long-time limit: integral_0^tau ds integral_0^s ds' (2H1 + H)(s - s');
// approaches (kappa^2/2) tau once tau clears the decay scale
double predict_covariance_growth(const CorrelationProfile& profile, double tau);

// Profile extraction along the straight worldline x(s) = (s / mc) p.
// Solves the two tensor contractions
//   C1 = G_{mn;sr} eta^{ms} eta^{nr} = 6 (4 H1 + H)
//   C2 = G_{mn;sr} dx^m eta^{nr} dx^s = 3 u (2 H1 + H)
// for H1 and H at each grid point (u = s^2); at s = 0 the convention is
// H(0) = 0, H1(0) = C1 / 24.
struct ProfileEstimationOptions {
    int n_modes = 4096;
    int n_seeds = 200;
    double epsilon = 0.1;
    std::uint64_t base_seed = 0;
    double mass = 1.0;
    double c = 1.0;
};

// Monte Carlo estimate over independent field realizations, with standard
// errors propagated through the (linear) contraction solve
CorrelationProfile h_profiles_from_field(const SpectralDensity& spec, const FourVector& p,
                                         std::vector<double> s_grid,
                                         const ProfileEstimationOptions& opt);

// same contractions applied to the deterministic quadrature prediction of the
// two-point tensor; the oracle route for the Monte Carlo estimator
CorrelationProfile h_profiles_spectral(const SpectralDensity& spec, const FourVector& p,
                                       std::vector<double> s_grid, double epsilon,
                                       double mass = 1.0, double c = 1.0);

// On-axis scalar correlation of a rotation-invariant density,
//   g(u) = eps^2 * integral Gt(k) cos(k^0 sqrt(u)) d^4k,
// with quadrature-backed first and second derivatives; the analytic-scalar
// input for the g-route kappa^2 of a sampled field
CorrelationProfile scalar_profile_from_density(const SpectralDensity& spec, double epsilon,
                                               int order = 200);

}  // namespace reldiff
