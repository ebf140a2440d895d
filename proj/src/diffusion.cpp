#include "reldiff/diffusion.hpp"

#include <cmath>
#include <stdexcept>

namespace reldiff {

namespace {

double p0_of(const std::array<double, 3>& p, const ParticleParams& pp) {
    const double m2c2 = pp.m * pp.m * pp.c * pp.c;
    return std::sqrt(m2c2 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
}

}  // namespace

double generator_apply(DiffusionKind kind, const MomentumGrid& grid,
                       std::span<const double> f, std::array<int, 3> idx,
                       const ParticleParams& pp) {
    if (f.size() != grid.size()) throw std::invalid_argument("generator_apply: f size mismatch");
    const int i = idx[0], j = idx[1], k = idx[2];
    if (!grid.interior(i, j, k)) throw std::domain_error("generator_apply: boundary point");

    const auto at = [&](int a, int b, int c) { return f[grid.index(a, b, c)]; };
    const auto shift = [&](int axis, int d, std::array<int, 3> q) {
        q[static_cast<std::size_t>(axis)] += d;
        return q;
    };
    const std::array<double, 3> p = grid.point(i, j, k);
    const double h = grid.h;
    const double m2c2 = pp.m * pp.m * pp.c * pp.c;
    const double mc = pp.m * pp.c;
    const double f0 = at(i, j, k);

    double result = 0.0;
    for (int a = 0; a < 3; ++a) {
        const auto ip = shift(a, +1, idx), im = shift(a, -1, idx);
        const double fp = at(ip[0], ip[1], ip[2]);
        const double fm = at(im[0], im[1], im[2]);
        const double aaa = m2c2 + p[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(a)];
        result += aaa * (fp - 2.0 * f0 + fm) / (h * h);

        double drift = 3.0 * p[static_cast<std::size_t>(a)];
        if (kind == DiffusionKind::JuttnerLab)
            drift -= p0_of(p, pp) / mc * p[static_cast<std::size_t>(a)];
        result += drift * (fp - fm) / (2.0 * h);

        for (int b = 0; b < 3; ++b) {
            if (b == a) continue;
            const auto pp_idx = shift(b, +1, ip), pm_idx = shift(b, -1, ip);
            const auto mp_idx = shift(b, +1, im), mm_idx = shift(b, -1, im);
            const double fpp = at(pp_idx[0], pp_idx[1], pp_idx[2]);
            const double fpm = at(pm_idx[0], pm_idx[1], pm_idx[2]);
            const double fmp = at(mp_idx[0], mp_idx[1], mp_idx[2]);
            const double fmm = at(mm_idx[0], mm_idx[1], mm_idx[2]);
            const double aab = p[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(b)];
            result += aab * (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        }
    }
    return result;
}

std::vector<double> weighted_generator_matrix(const MomentumGrid& grid,
                                              const ParticleParams& pp) {
    const std::size_t N = grid.size();
    std::vector<double> B(N * N, 0.0);
    const double m2c2 = pp.m * pp.m * pp.c * pp.c;
    const double inv2h = 1.0 / (2.0 * grid.h);

    // per-node contribution -d_j(n) c_{jl}(n) d_l(n)^T; symmetric because c is
    for (int i = 0; i < grid.n[0]; ++i)
        for (int j = 0; j < grid.n[1]; ++j)
            for (int k = 0; k < grid.n[2]; ++k) {
                const std::array<int, 3> idx{i, j, k};
                if (!grid.interior(i, j, k)) continue;
                const auto p = grid.point(i, j, k);
                const double p0 = p0_of(p, pp);
                // stencil columns for each direction
                std::array<std::array<std::size_t, 2>, 3> cols{};
                for (int a = 0; a < 3; ++a) {
                    auto up = idx, dn = idx;
                    up[static_cast<std::size_t>(a)] += 1;
                    dn[static_cast<std::size_t>(a)] -= 1;
                    cols[static_cast<std::size_t>(a)] = {grid.index(up[0], up[1], up[2]),
                                                         grid.index(dn[0], dn[1], dn[2])};
                }
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) {
                        double c = p[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(b)];
                        if (a == b) c += m2c2;
                        c /= p0;
                        const double w = -c * inv2h * inv2h;
                        const auto& ca = cols[static_cast<std::size_t>(a)];
                        const auto& cb = cols[static_cast<std::size_t>(b)];
                        B[ca[0] * N + cb[0]] += w;
                        B[ca[1] * N + cb[1]] += w;
                        B[ca[0] * N + cb[1]] -= w;
                        B[ca[1] * N + cb[0]] -= w;
                    }
            }

    // L = diag(p0) B
    std::vector<double> L(N * N, 0.0);
    std::size_t row = 0;
    for (int i = 0; i < grid.n[0]; ++i)
        for (int j = 0; j < grid.n[1]; ++j)
            for (int k = 0; k < grid.n[2]; ++k, ++row) {
                const double p0 = p0_of(grid.point(i, j, k), pp);
                for (std::size_t col = 0; col < N; ++col) L[row * N + col] = p0 * B[row * N + col];
            }
    return L;
}

std::array<double, 3> sde_drift(DiffusionKind kind, const std::array<double, 3>& p,
                                const DiffusionParams& dp) {
    std::array<double, 3> b{};
    if (kind == DiffusionKind::SchayDudleyProper) {
        for (int i = 0; i < 3; ++i) b[static_cast<std::size_t>(i)] = 1.5 * dp.kappa2 * p[static_cast<std::size_t>(i)];
    } else {
        const double mc = dp.particle.m * dp.particle.c;
        const double coef = 0.5 * dp.kappa2 * (3.0 - p0_of(p, dp.particle) / mc);
        for (int i = 0; i < 3; ++i) b[static_cast<std::size_t>(i)] = coef * p[static_cast<std::size_t>(i)];
    }
    return b;
}

std::array<double, 9> sde_diffusion_root(const std::array<double, 3>& p,
                                         const DiffusionParams& dp) {
    const double mc = dp.particle.m * dp.particle.c;
    const double kappa = std::sqrt(dp.kappa2);
    const double pn2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    std::array<double, 9> s{};
    for (int i = 0; i < 3; ++i) s[static_cast<std::size_t>(4 * i)] = kappa * mc;
    if (pn2 > 0.0) {
        const double p0 = std::sqrt(mc * mc + pn2);
        const double coef = kappa * (p0 - mc) / pn2;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                s[static_cast<std::size_t>(3 * i + j)] += coef * p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(j)];
    }
    return s;
}

MomentumState sde_step(const MomentumState& st, const DiffusionParams& dp, double ds,
                       const std::array<double, 3>& noise) {
    if (!(ds > 0.0)) throw std::invalid_argument("sde_step: ds must be positive");
    const double mc = dp.particle.m * dp.particle.c;
    const double p0_pre = st.p0(dp.particle);
    double ds_eff = ds;
    if (dp.kind == DiffusionKind::JuttnerLab)
        ds_eff = ds * dp.particle.m * dp.particle.c * dp.particle.c / p0_pre;

    const auto b = sde_drift(dp.kind, st.p, dp);
    const auto sig = sde_diffusion_root(st.p, dp);
    const double root_ds = std::sqrt(ds_eff);

    MomentumState out = st;
    for (int i = 0; i < 3; ++i) {
        double diff = 0.0;
        for (int j = 0; j < 3; ++j) diff += sig[static_cast<std::size_t>(3 * i + j)] * noise[static_cast<std::size_t>(j)];
        out.p[static_cast<std::size_t>(i)] =
            st.p[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)] * ds_eff + diff * root_ds;
    }
    if (st.x && dp.kind == DiffusionKind::SchayDudleyProper) {
        FourVector x = *st.x;
        x.c[0] += p0_pre / mc * ds;
        for (int i = 0; i < 3; ++i) x.c[static_cast<std::size_t>(i + 1)] += st.p[static_cast<std::size_t>(i)] / mc * ds;
        out.x = x;
    }
    return out;
}

std::array<double, 3> stationary_flux(const std::array<double, 3>& p, const DiffusionParams& dp,
                                      double alpha, double beta_c) {
    const double mc = dp.particle.m * dp.particle.c;
    if (beta_c < 0.0) beta_c = 1.0 / mc;
    const double m2c2 = mc * mc;
    const double p0 = p0_of(p, dp.particle);
    const double rho = std::pow(p0, alpha) * std::exp(-beta_c * p0);
    // d_l rho = rho (alpha/p0 - beta c) p_l / p0
    const double drho_coef = rho * (alpha / p0 - beta_c) / p0;
    std::array<double, 3> flux{};
    for (int jx = 0; jx < 3; ++jx) {
        const std::size_t j = static_cast<std::size_t>(jx);
        // d_l(a^{jl} rho) = 4 p^j rho + a^{jl} d_l rho
        double div = 4.0 * p[j] * rho;
        for (int lx = 0; lx < 3; ++lx) {
            const std::size_t l = static_cast<std::size_t>(lx);
            double a = p[j] * p[l];
            if (j == l) a += m2c2;
            div += a * drho_coef * p[l];
        }
        const double b = (3.0 - p0 / mc) * p[j];
        flux[j] = div - b * rho;
    }
    return flux;
}

}  // namespace reldiff
