#include "reldiff/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "reldiff/field.hpp"
#include "reldiff/numerics.hpp"
#include "reldiff/stats.hpp"
#include "reldiff/two_point.hpp"

namespace reldiff {

CorrelationProfile CorrelationProfile::from_scalar(std::function<double(double)> g,
                                                   std::function<double(double)> g1,
                                                   std::function<double(double)> g2,
                                                   double decay_scale) {
    CorrelationProfile p;
    p.g_ = std::move(g);
    p.g1_ = std::move(g1);
    p.g2_ = std::move(g2);
    p.decay_scale_ = decay_scale;
    p.h1_fn_ = [f = p.g1_](double s) { return 2.0 * f(s * s); };
    p.h_fn_ = [f = p.g2_](double s) { return 4.0 * s * s * f(s * s); };
    return p;
}

CorrelationProfile CorrelationProfile::from_h_functions(std::function<double(double)> H1,
                                                        std::function<double(double)> H,
                                                        double decay_scale) {
    CorrelationProfile p;
    p.h1_fn_ = std::move(H1);
    p.h_fn_ = std::move(H);
    p.decay_scale_ = decay_scale;
    return p;
}

CorrelationProfile CorrelationProfile::from_table(Table t, double decay_scale) {
    if (t.s.size() < 2 || t.s.size() != t.H1.size() || t.s.size() != t.H.size())
        throw std::invalid_argument("CorrelationProfile: table arrays must match, length >= 2");
    if (t.s.front() != 0.0)
        throw std::invalid_argument("CorrelationProfile: table grid must start at s = 0");
    for (std::size_t i = 1; i < t.s.size(); ++i)
        if (!(t.s[i] > t.s[i - 1]))
            throw std::invalid_argument("CorrelationProfile: table grid must be strictly increasing");
    CorrelationProfile p;
    p.table_ = std::move(t);
    p.decay_scale_ = decay_scale;
    return p;
}

double CorrelationProfile::g(double u) const {
    if (!g_) throw std::logic_error("CorrelationProfile: no scalar representation");
    return g_(u);
}
double CorrelationProfile::g1(double u) const {
    if (!g1_) throw std::logic_error("CorrelationProfile: no scalar representation");
    return g1_(u);
}
double CorrelationProfile::g2(double u) const {
    if (!g2_) throw std::logic_error("CorrelationProfile: no scalar representation");
    return g2_(u);
}

namespace {
double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] * (1.0 - w) + ys[i] * w;
}
}  // namespace

double CorrelationProfile::H1(double s) const {
    if (h1_fn_) return h1_fn_(s);
    if (table_) return interp(table_->s, table_->H1, s);
    throw std::logic_error("CorrelationProfile: empty profile");
}

double CorrelationProfile::H(double s) const {
    if (h_fn_) return h_fn_(s);
    if (table_) return interp(table_->s, table_->H, s);
    throw std::logic_error("CorrelationProfile: empty profile");
}

const CorrelationProfile::Table& CorrelationProfile::table() const {
    if (!table_) throw std::logic_error("CorrelationProfile: no tabulated representation");
    return *table_;
}

CorrelationProfile::Table CorrelationProfile::tabulate(double s_max, int n) const {
    if (n < 2 || s_max <= 0.0) throw std::invalid_argument("tabulate: bad grid");
    Table t;
    t.s.resize(static_cast<std::size_t>(n));
    t.H1.resize(static_cast<std::size_t>(n));
    t.H.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double s = s_max * i / (n - 1);
        t.s[static_cast<std::size_t>(i)] = s;
        t.H1[static_cast<std::size_t>(i)] = H1(s);
        t.H[static_cast<std::size_t>(i)] = H(s);
    }
    return t;
}

CorrelationProfile gaussian_correlation(double amp, double u_scale) {
    const double a = amp, w = u_scale;
    return CorrelationProfile::from_scalar(
        [a, w](double u) { return a * std::exp(-u / w); },
        [a, w](double u) { return -a / w * std::exp(-u / w); },
        [a, w](double u) { return a / (w * w) * std::exp(-u / w); }, std::sqrt(u_scale));
}

double kappa2_from_h(const CorrelationProfile& profile) {
    if (profile.has_table()) {
        const auto& t = profile.table();
        std::vector<double> integrand(t.s.size());
        double peak = 0.0;
        for (std::size_t i = 0; i < t.s.size(); ++i) {
            integrand[i] = 2.0 * t.H1[i] + t.H[i];
            peak = std::max(peak, std::abs(integrand[i]));
        }
        if (peak == 0.0) return 0.0;
        if (std::abs(integrand.back()) >= 0.01 * peak)
            throw std::runtime_error("correlation not resolved");
        return 2.0 * integrate_trapezoid(t.s, integrand);
    }
    // analytic profile functions: adaptive quadrature with doubling tail
    const auto f = [&](double s) { return 2.0 * profile.H1(s) + profile.H(s); };
    double peak = 0.0;
    for (int i = 0; i <= 256; ++i)
        peak = std::max(peak, std::abs(f(profile.decay_scale() * 10.0 * i / 256.0)));
    double s_end = 10.0 * profile.decay_scale();
    double total = integrate_adaptive(f, 0.0, s_end);
    for (int d = 0; d < 20; ++d) {
        if (std::abs(f(s_end)) < 1e-9 * (peak > 0.0 ? peak : 1.0)) break;
        const double inc = integrate_adaptive(f, s_end, 2.0 * s_end);
        total += inc;
        s_end *= 2.0;
        if (d == 19) throw std::runtime_error("correlation not resolved");
    }
    if (peak > 0.0 && std::abs(f(s_end)) >= 0.01 * peak)
        throw std::runtime_error("correlation not resolved");
    return 2.0 * total;
}

double kappa2_from_g(const CorrelationProfile& profile) {
    if (!profile.has_scalar())
        throw std::invalid_argument("kappa2_from_g: profile must carry the analytic scalar");
    // 2 int u^{-1/2} g'(u) du = 4 int g'(s^2) ds
    const auto f = [&](double s) { return profile.g1(s * s); };
    double s_end = 10.0 * profile.decay_scale();
    double total = integrate_adaptive(f, 0.0, s_end);
    double scale = std::max(std::abs(total), 1e-30);
    for (int d = 0;; ++d) {
        const double inc = integrate_adaptive(f, s_end, 2.0 * s_end);
        total += inc;
        scale = std::max(scale, std::abs(total));
        s_end *= 2.0;
        if (std::abs(inc) < 1e-10 * scale) break;
        if (d >= 24) throw std::runtime_error("profile not admissible");
    }
    return 4.0 * total;
}

double predict_covariance_growth(const CorrelationProfile& profile, double tau) {
    if (tau < 0.0) throw std::invalid_argument("predict_covariance_growth: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    // int_0^tau int_0^s (2H1+H)(s-s') ds' ds = int_0^tau (tau - u) (2H1+H)(u) du
    if (profile.has_table()) {
        const auto& t = profile.table();
        std::vector<double> integrand;
        std::vector<double> grid;
        for (std::size_t i = 0; i < t.s.size() && t.s[i] <= tau; ++i) {
            grid.push_back(t.s[i]);
            integrand.push_back((tau - t.s[i]) * (2.0 * t.H1[i] + t.H[i]));
        }
        if (grid.size() < 2 || grid.back() < tau) {
            if (tau > t.s.back()) throw std::invalid_argument("predict_covariance_growth: tau beyond table");
            grid.push_back(tau);
            integrand.push_back(0.0);
        }
        return integrate_trapezoid(grid, integrand);
    }
    const auto f = [&](double u) { return (tau - u) * (2.0 * profile.H1(u) + profile.H(u)); };
    return integrate_adaptive(f, 0.0, tau);
}

namespace {

std::array<double, 2> solve_profiles(double C1, double C2, double u) {
    if (u == 0.0) return {C1 / 24.0, 0.0};
    const double H1 = C1 / 12.0 - C2 / (6.0 * u);
    const double H = -C1 / 6.0 + 2.0 * C2 / (3.0 * u);
    return {H1, H};
}

}  // namespace

CorrelationProfile h_profiles_from_field(const SpectralDensity& spec, const FourVector& p,
                                         std::vector<double> s_grid,
                                         const ProfileEstimationOptions& opt) {
    if (s_grid.size() < 2 || s_grid.front() != 0.0)
        throw std::invalid_argument("h_profiles_from_field: grid must start at 0 with >= 2 points");
    const double mc = opt.mass * opt.c;
    const double shell = std::abs(minkowski_dot(p, p) - mc * mc) / (mc * mc);
    if (shell > 1e-6)
        throw std::invalid_argument("h_profiles_from_field: p must lie on the mass shell");

    const std::size_t ns = s_grid.size();
    std::vector<Welford> accH1(ns), accH(ns);
    for (int seed = 0; seed < opt.n_seeds; ++seed) {
        const auto real = sample_realization(spec, opt.n_modes, opt.base_seed, opt.epsilon, nullptr,
                                             static_cast<std::uint64_t>(seed));
        const AntisymTensor F0 = real.evaluate({0, 0, 0, 0});
        for (std::size_t i = 0; i < ns; ++i) {
            const double s = s_grid[i];
            const FourVector x = p * (s / mc);
            const AntisymTensor Fs = real.evaluate(x);
            PairMatrix prod{};
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b)
                    prod[static_cast<std::size_t>(6 * a + b)] =
                        Fs.component(static_cast<std::size_t>(a)) * F0.component(static_cast<std::size_t>(b));
            const double C1 = contract_trace(prod);
            const double C2 = contract_direction(prod, x);
            const auto hh = solve_profiles(C1, C2, s * s);
            accH1[i].add(hh[0]);
            accH[i].add(hh[1]);
        }
    }

    CorrelationProfile::Table t;
    t.s = std::move(s_grid);
    t.H1.resize(ns);
    t.H.resize(ns);
    t.se_H1.resize(ns);
    t.se_H.resize(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        t.H1[i] = accH1[i].mean();
        t.H[i] = accH[i].mean();
        t.se_H1[i] = accH1[i].standard_error();
        t.se_H[i] = accH[i].standard_error();
    }
    const double scale = t.s.back() / 10.0;
    return CorrelationProfile::from_table(std::move(t), scale);
}

CorrelationProfile h_profiles_spectral(const SpectralDensity& spec, const FourVector& p,
                                       std::vector<double> s_grid, double epsilon, double mass,
                                       double c) {
    if (s_grid.size() < 2 || s_grid.front() != 0.0)
        throw std::invalid_argument("h_profiles_spectral: grid must start at 0 with >= 2 points");
    const double mc = mass * c;
    const std::size_t ns = s_grid.size();
    CorrelationProfile::Table t;
    t.s = s_grid;
    t.H1.resize(ns);
    t.H.resize(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        const double s = s_grid[i];
        const FourVector x = p * (s / mc);
        const TwoPointTensor tp = spectral_two_point(spec, epsilon, x);
        const double C1 = contract_trace(tp.value);
        const double C2 = contract_direction(tp.value, x);
        const auto hh = solve_profiles(C1, C2, s * s);
        t.H1[i] = hh[0];
        t.H[i] = hh[1];
    }
    const double scale = t.s.back() / 10.0;
    return CorrelationProfile::from_table(std::move(t), scale);
}

CorrelationProfile scalar_profile_from_density(const SpectralDensity& spec, double epsilon,
                                               int order) {
    if (!spec.rotation_invariant)
        throw std::invalid_argument(
            "scalar_profile_from_density: needs a rotation-invariant density");
    const double K = spec.k_max;
    const auto& gl = gauss_legendre(order);

    // shell weights sigma(k0) = 4 pi int q^2 Gt(k0, q) dq at the outer nodes
    std::vector<double> k0s(static_cast<std::size_t>(order));
    std::vector<double> ws(static_cast<std::size_t>(order));
    double wsum = 0.0, k0_mean = 0.0;
    for (int i = 0; i < order; ++i) {
        const double k0 = 0.5 * K * (gl.nodes[static_cast<std::size_t>(i)] + 1.0);
        const double wk0 = 0.5 * K * gl.weights[static_cast<std::size_t>(i)];
        double sigma = 0.0;
        for (int j = 0; j < order; ++j) {
            const double q = 0.5 * k0 * (gl.nodes[static_cast<std::size_t>(j)] + 1.0);
            const double wq = 0.5 * k0 * gl.weights[static_cast<std::size_t>(j)];
            sigma += wq * 4.0 * M_PI * q * q * spec({k0, 0.0, 0.0, q});
        }
        k0s[static_cast<std::size_t>(i)] = k0;
        ws[static_cast<std::size_t>(i)] = wk0 * sigma * epsilon * epsilon;
        wsum += ws[static_cast<std::size_t>(i)];
        k0_mean += ws[static_cast<std::size_t>(i)] * k0;
    }
    const double decay = wsum > 0.0 ? 2.0 / (k0_mean / wsum) : 1.0;

    auto g = [k0s, ws](double u) {
        const double t = std::sqrt(std::max(u, 0.0));
        double acc = 0.0;
        for (std::size_t i = 0; i < k0s.size(); ++i) acc += ws[i] * std::cos(k0s[i] * t);
        return acc;
    };
    auto g1 = [k0s, ws](double u) {
        const double t = std::sqrt(std::max(u, 0.0));
        double acc = 0.0;
        for (std::size_t i = 0; i < k0s.size(); ++i) {
            const double k = k0s[i];
            if (t < 1e-6) {
                const double a2 = k * t * k * t;
                acc += ws[i] * (-0.5 * k * k) * (1.0 - a2 / 6.0 + a2 * a2 / 120.0);
            } else {
                acc += ws[i] * (-k * std::sin(k * t) / (2.0 * t));
            }
        }
        return acc;
    };
    auto g2 = [k0s, ws](double u) {
        const double t = std::sqrt(std::max(u, 0.0));
        double acc = 0.0;
        for (std::size_t i = 0; i < k0s.size(); ++i) {
            const double k = k0s[i];
            if (t < 1e-3) {
                const double k2 = k * k;
                acc += ws[i] * (k2 * k2 / 12.0) * (1.0 - k2 * t * t / 10.0);
            } else {
                const double a = k * t;
                acc += ws[i] * (-k) * (k * std::cos(a) / (4.0 * t * t) - std::sin(a) / (4.0 * t * t * t));
            }
        }
        return acc;
    };
    return CorrelationProfile::from_scalar(std::move(g), std::move(g1), std::move(g2), decay);
}

}  // namespace reldiff
