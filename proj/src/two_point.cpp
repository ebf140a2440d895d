#include "reldiff/two_point.hpp"

#include <cmath>
#include <stdexcept>

#include "reldiff/numerics.hpp"
#include "reldiff/rng.hpp"
#include "reldiff/stats.hpp"

namespace reldiff {

PairMatrix assemble_pair_combination(const std::array<double, 16>& G) {
    auto g = [&](int m, int n) { return G[static_cast<std::size_t>(4 * m + n)]; };
    PairMatrix out{};
    for (int a = 0; a < 6; ++a) {
        const int mu = kPairIndex[static_cast<std::size_t>(a)][0];
        const int nu = kPairIndex[static_cast<std::size_t>(a)][1];
        for (int b = 0; b < 6; ++b) {
            const int sg = kPairIndex[static_cast<std::size_t>(b)][0];
            const int rh = kPairIndex[static_cast<std::size_t>(b)][1];
            double v = 0.0;
            if (mu == sg) v += kMetricDiag[static_cast<std::size_t>(mu)] * g(nu, rh);
            if (mu == rh) v -= kMetricDiag[static_cast<std::size_t>(mu)] * g(nu, sg);
            if (nu == rh) v += kMetricDiag[static_cast<std::size_t>(nu)] * g(sg, mu);
            if (nu == sg) v -= kMetricDiag[static_cast<std::size_t>(nu)] * g(mu, rh);
            out[static_cast<std::size_t>(6 * a + b)] = v;
        }
    }
    return out;
}

TwoPointTensor analytic_two_point(const CorrelationProfile& profile, const FourVector& dx) {
    if (!profile.has_scalar())
        throw std::invalid_argument("analytic_two_point: profile must carry the scalar g");
    const double u = minkowski_dot(dx, dx);
    const double h1 = 2.0 * profile.g1(u);
    const double h2 = 4.0 * profile.g2(u);
    std::array<double, 16> G{};
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
            double v = dx.lower(static_cast<std::size_t>(m)) * dx.lower(static_cast<std::size_t>(n)) * h2;
            if (m == n) v += kMetricDiag[static_cast<std::size_t>(m)] * h1;
            G[static_cast<std::size_t>(4 * m + n)] = v;
        }
    TwoPointTensor out;
    out.separation = dx;
    out.value = assemble_pair_combination(G);
    return out;
}

namespace {

// spherical Bessel helpers, stable near zero
void bessel_j01(double b, double& j0, double& j1_over_b) {
    if (std::abs(b) < 1e-4) {
        const double b2 = b * b;
        j0 = 1.0 - b2 / 6.0 + b2 * b2 / 120.0;
        j1_over_b = 1.0 / 3.0 - b2 / 30.0 + b2 * b2 / 840.0;
    } else {
        const double s = std::sin(b), c = std::cos(b);
        j0 = s / b;
        j1_over_b = (s / b - c) / (b * b);
    }
}

}  // namespace

TwoPointTensor spectral_two_point(const SpectralDensity& spec, double epsilon,
                                  const FourVector& dx) {
    if (!spec.rotation_invariant)
        throw std::invalid_argument(
            "spectral_two_point: quadrature reduction needs a rotation-invariant density");
    const double K = spec.k_max;
    const double t = dx.c[0];
    const std::array<double, 3> rv{dx.c[1], dx.c[2], dx.c[3]};
    const double r = std::sqrt(rv[0] * rv[0] + rv[1] * rv[1] + rv[2] * rv[2]);
    std::array<double, 3> nhat{0.0, 0.0, 1.0};
    if (r > 0.0)
        for (int i = 0; i < 3; ++i) nhat[static_cast<std::size_t>(i)] = rv[static_cast<std::size_t>(i)] / r;

    // quadrature orders grow with the largest phase across the box
    const int nk0 = std::min(480, 96 + static_cast<int>(6.0 * K * std::abs(t)));
    const int nq = std::min(480, 96 + static_cast<int>(6.0 * K * r));
    const auto& gl0 = gauss_legendre(nk0);
    const auto& glq = gauss_legendre(nq);

    // moments of G~ k_m k_n cos(k.dx) over the truncated support:
    // J00, A (coefficient of -n_i in J_{0i}), B, C with J_{ij} = B d_ij + C n_i n_j
    double J00 = 0.0, A = 0.0, B = 0.0, C = 0.0;
    for (int i = 0; i < nk0; ++i) {
        const double k0 = 0.5 * K * (gl0.nodes[static_cast<std::size_t>(i)] + 1.0);
        const double wk0 = 0.5 * K * gl0.weights[static_cast<std::size_t>(i)];
        const double ct = std::cos(k0 * t), st = std::sin(k0 * t);
        for (int j = 0; j < nq; ++j) {
            const double q = 0.5 * k0 * (glq.nodes[static_cast<std::size_t>(j)] + 1.0);
            const double wq = 0.5 * k0 * glq.weights[static_cast<std::size_t>(j)];
            const FourVector kprobe{k0, 0.0, 0.0, q};
            const double g = spec(kprobe);
            if (g == 0.0) continue;
            double j0 = 0.0, j1b = 0.0;
            bessel_j01(q * r, j0, j1b);
            const double c2 = j0 - 2.0 * j1b;           // <mu^2 cos>
            const double alpha = 0.5 * (j0 - c2);       // k^i k^j angular: alpha d + beta nn
            const double beta = 0.5 * (3.0 * c2 - j0);
            const double base = wk0 * wq * g * 4.0 * M_PI * q * q;
            J00 += base * k0 * k0 * ct * j0;
            A += base * k0 * q * st * (j1b * q * r);    // j1(qr) = j1b * qr
            B += base * q * q * ct * alpha;
            C += base * q * q * ct * beta;
        }
    }

    // lower-index G_{mn} = -J_{mn}: J_{0i} = -A n_i, J_{ij} = B d_ij + C n_i n_j
    std::array<double, 16> G{};
    G[0] = -J00;
    for (int i = 0; i < 3; ++i) {
        const double v = A * nhat[static_cast<std::size_t>(i)];
        G[static_cast<std::size_t>(i + 1)] = v;
        G[static_cast<std::size_t>(4 * (i + 1))] = v;
        for (int j = 0; j < 3; ++j) {
            double w = -C * nhat[static_cast<std::size_t>(i)] * nhat[static_cast<std::size_t>(j)];
            if (i == j) w -= B;
            G[static_cast<std::size_t>(4 * (i + 1) + j + 1)] = w;
        }
    }

    TwoPointTensor out;
    out.separation = dx;
    PairMatrix comb = assemble_pair_combination(G);
    const double e2 = epsilon * epsilon;
    for (auto& v : comb) v *= e2;
    out.value = comb;
    return out;
}

TwoPointTensor empirical_two_point(const SpectralDensity& spec, int n_modes, int n_seeds,
                                   const FourVector& x, const FourVector& xprime,
                                   double epsilon, std::uint64_t base_seed) {
    if (n_seeds < 2) throw std::invalid_argument("empirical_two_point: n_seeds must be >= 2");
    std::array<Welford, 36> acc{};
    for (int s = 0; s < n_seeds; ++s) {
        const auto real =
            sample_realization(spec, n_modes, base_seed, epsilon, nullptr, static_cast<std::uint64_t>(s));
        const AntisymTensor Fa = real.evaluate(x);
        const AntisymTensor Fb = real.evaluate(xprime);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
                acc[static_cast<std::size_t>(6 * a + b)].add(Fa.component(static_cast<std::size_t>(a)) *
                                                             Fb.component(static_cast<std::size_t>(b)));
    }
    TwoPointTensor out;
    out.separation = x - xprime;
    for (int i = 0; i < 36; ++i) {
        out.value[static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(i)].mean();
        out.se[static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(i)].standard_error();
    }
    return out;
}

double contract_trace(const PairMatrix& G) {
    double c1 = 0.0;
    for (int a = 0; a < 6; ++a) {
        const int mu = kPairIndex[static_cast<std::size_t>(a)][0];
        const int nu = kPairIndex[static_cast<std::size_t>(a)][1];
        for (int b = 0; b < 6; ++b) {
            const int sg = kPairIndex[static_cast<std::size_t>(b)][0];
            const int rh = kPairIndex[static_cast<std::size_t>(b)][1];
            const double v = G[static_cast<std::size_t>(6 * a + b)];
            // expand both pair orderings of each slot; eta^{ms} eta^{nr} picks
            // m == s and n == r
            const int idx[2][3] = {{mu, nu, 1}, {nu, mu, -1}};
            const int jdx[2][3] = {{sg, rh, 1}, {rh, sg, -1}};
            for (const auto& I : idx)
                for (const auto& J : jdx) {
                    if (I[0] == J[0] && I[1] == J[1])
                        c1 += I[2] * J[2] * v * kMetricDiag[static_cast<std::size_t>(I[0])] *
                              kMetricDiag[static_cast<std::size_t>(I[1])];
                }
        }
    }
    return c1;
}

double contract_direction(const PairMatrix& G, const FourVector& dx) {
    double c2 = 0.0;
    for (int a = 0; a < 6; ++a) {
        const int mu = kPairIndex[static_cast<std::size_t>(a)][0];
        const int nu = kPairIndex[static_cast<std::size_t>(a)][1];
        for (int b = 0; b < 6; ++b) {
            const int sg = kPairIndex[static_cast<std::size_t>(b)][0];
            const int rh = kPairIndex[static_cast<std::size_t>(b)][1];
            const double v = G[static_cast<std::size_t>(6 * a + b)];
            const int idx[2][3] = {{mu, nu, 1}, {nu, mu, -1}};
            const int jdx[2][3] = {{sg, rh, 1}, {rh, sg, -1}};
            for (const auto& I : idx)
                for (const auto& J : jdx) {
                    if (I[1] == J[1])
                        c2 += I[2] * J[2] * v * dx.c[static_cast<std::size_t>(I[0])] *
                              kMetricDiag[static_cast<std::size_t>(I[1])] *
                              dx.c[static_cast<std::size_t>(J[0])];
                }
        }
    }
    return c2;
}

PairMatrix pair_transform(const Mat4& L, const PairMatrix& G) {
    // expand to full indices, transform each slot with L on lower indices,
    // read back the pair components
    double Gf[4][4][4][4] = {};
    for (int a = 0; a < 6; ++a) {
        const int mu = kPairIndex[static_cast<std::size_t>(a)][0];
        const int nu = kPairIndex[static_cast<std::size_t>(a)][1];
        for (int b = 0; b < 6; ++b) {
            const int sg = kPairIndex[static_cast<std::size_t>(b)][0];
            const int rh = kPairIndex[static_cast<std::size_t>(b)][1];
            const double v = G[static_cast<std::size_t>(6 * a + b)];
            Gf[mu][nu][sg][rh] = v;
            Gf[nu][mu][sg][rh] = -v;
            Gf[mu][nu][rh][sg] = -v;
            Gf[nu][mu][rh][sg] = v;
        }
    }
    PairMatrix out{};
    for (int a = 0; a < 6; ++a) {
        const int m = kPairIndex[static_cast<std::size_t>(a)][0];
        const int n = kPairIndex[static_cast<std::size_t>(a)][1];
        for (int b = 0; b < 6; ++b) {
            const int s = kPairIndex[static_cast<std::size_t>(b)][0];
            const int r = kPairIndex[static_cast<std::size_t>(b)][1];
            double acc = 0.0;
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q)
                    for (int c = 0; c < 4; ++c)
                        for (int d = 0; d < 4; ++d)
                            acc += L.at(p, m) * L.at(q, n) * L.at(c, s) * L.at(d, r) * Gf[p][q][c][d];
            out[static_cast<std::size_t>(6 * a + b)] = acc;
        }
    }
    return out;
}

Mat4 lower_boost_matrix(const std::array<double, 3>& v) {
    // lower components transform with eta L eta when upper transform with L
    const Mat4 L = boost_matrix(v);
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out.at(i, j) = kMetricDiag[static_cast<std::size_t>(i)] * L.at(i, j) *
                           kMetricDiag[static_cast<std::size_t>(j)];
    return out;
}

}  // namespace reldiff
