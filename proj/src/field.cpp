#include "reldiff/field.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "reldiff/rng.hpp"
#include "json.hpp"

namespace reldiff {

PairMatrix mode_covariance(const FourVector& k) {
    double kl[4];
    for (int mu = 0; mu < 4; ++mu) kl[mu] = k.lower(static_cast<std::size_t>(mu));
    PairMatrix M{};
    for (int a = 0; a < 6; ++a) {
        const int mu = kPairIndex[static_cast<std::size_t>(a)][0];
        const int nu = kPairIndex[static_cast<std::size_t>(a)][1];
        for (int b = 0; b < 6; ++b) {
            const int sg = kPairIndex[static_cast<std::size_t>(b)][0];
            const int rh = kPairIndex[static_cast<std::size_t>(b)][1];
            const double T = kMetricDiag[static_cast<std::size_t>(mu)] * (mu == sg) * kl[nu] * kl[rh] -
                             kMetricDiag[static_cast<std::size_t>(mu)] * (mu == rh) * kl[nu] * kl[sg] +
                             kMetricDiag[static_cast<std::size_t>(nu)] * (nu == rh) * kl[mu] * kl[sg] -
                             kMetricDiag[static_cast<std::size_t>(nu)] * (nu == sg) * kl[mu] * kl[rh];
            M[static_cast<std::size_t>(6 * a + b)] = -T;
        }
    }
    return M;
}

FieldRealization::FieldRealization(std::vector<FieldMode> modes, std::uint64_t seed,
                                   std::string spectral_label, double epsilon)
    : modes_(std::move(modes)), seed_(seed), label_(std::move(spectral_label)), epsilon_(epsilon) {
    flat_.resize(modes_.size() * 16);
    for (std::size_t n = 0; n < modes_.size(); ++n) {
        double* f = &flat_[16 * n];
        for (int i = 0; i < 4; ++i) f[i] = modes_[n].k.c[static_cast<std::size_t>(i)];
        for (int j = 0; j < 6; ++j) {
            f[4 + j] = modes_[n].w * modes_[n].z.component(static_cast<std::size_t>(j)).real();
            f[10 + j] = modes_[n].w * modes_[n].z.component(static_cast<std::size_t>(j)).imag();
        }
    }
}

AntisymTensor FieldRealization::evaluate(const FourVector& x) const {
    double acc[6] = {0, 0, 0, 0, 0, 0};
    const double x0 = x.c[0], x1 = x.c[1], x2 = x.c[2], x3 = x.c[3];
    const double* f = flat_.data();
    for (std::size_t n = 0; n < modes_.size(); ++n, f += 16) {
        const double phase = f[0] * x0 - f[1] * x1 - f[2] * x2 - f[3] * x3;
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        for (int j = 0; j < 6; ++j) acc[j] += f[4 + j] * c + f[10 + j] * s;
    }
    AntisymTensor F;
    for (int j = 0; j < 3; ++j) {
        F.e[static_cast<std::size_t>(j)] = acc[j];
        F.b[static_cast<std::size_t>(j)] = acc[j + 3];
    }
    return F;
}

FieldRealization sample_realization(const SpectralDensity& spec, int n_modes,
                                    std::uint64_t seed, double epsilon,
                                    SampleDiagnostics* diag, std::uint64_t stream_tag) {
    if (n_modes < 1) throw std::invalid_argument("sample_realization: n_modes must be >= 1");
    if (spec.bound <= 0.0) throw std::invalid_argument("sample_realization: density bound must be positive");

    RandomStream rs(seed, stream_id(StreamDomain::FieldModes, stream_tag));
    const double K = spec.k_max;

    std::vector<FieldMode> modes;
    modes.reserve(static_cast<std::size_t>(n_modes));
    std::uint64_t proposals = 0;
    std::uint64_t consecutive_failures = 0;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> solver;
    Eigen::Matrix<double, 6, 6> Mk;

    while (static_cast<int>(modes.size()) < n_modes) {
        ++proposals;
        FourVector k;
        k.c[0] = rs.uniform(0.0, K);
        for (int i = 1; i < 4; ++i) k.c[static_cast<std::size_t>(i)] = rs.uniform(-K, K);
        const double g = spec(k);
        bool accept = g > 0.0;
        if (accept && g < spec.bound) accept = rs.uniform() * spec.bound < g;
        if (!accept) {
            if (++consecutive_failures >= 1000000)
                throw std::runtime_error("degenerate spectral density");
            continue;
        }
        consecutive_failures = 0;

        const PairMatrix M = mode_covariance(k);
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c) Mk(r, c) = M[static_cast<std::size_t>(6 * r + c)];
        solver.compute(Mk);
        const auto& lam = solver.eigenvalues();
        const auto& Q = solver.eigenvectors();
        const double trace = Mk.trace();
        Eigen::Matrix<double, 6, 1> re, im;
        for (int j = 0; j < 6; ++j) {
            if (lam(j) < -1e-10 * trace) throw std::runtime_error("covariance not PSD");
            const double s = lam(j) > 0.0 ? std::sqrt(lam(j)) : 0.0;
            re(j) = s * rs.normal();
            im(j) = s * rs.normal();
        }
        const Eigen::Matrix<double, 6, 1> zr = Q * re;
        const Eigen::Matrix<double, 6, 1> zi = Q * im;

        FieldMode mode;
        mode.k = k;
        for (int j = 0; j < 6; ++j)
            mode.z.component(static_cast<std::size_t>(j)) = {zr(j), zi(j)};
        modes.push_back(mode);
    }

    // Z estimated from the acceptance rate of this very sampler; the box has
    // volume K * (2K)^3
    const double box_volume = K * 8.0 * K * K * K;
    const double z_est = box_volume * spec.bound * static_cast<double>(n_modes) /
                         static_cast<double>(proposals);
    const double w = epsilon * std::sqrt(z_est / static_cast<double>(n_modes));
    for (auto& m : modes) m.w = w;

    if (diag) {
        diag->proposals = proposals;
        diag->z_estimate = z_est;
    }
    return FieldRealization(std::move(modes), seed, spec.label, epsilon);
}

double mode_bianchi_residual(const FieldRealization& r) {
    double worst = 0.0;
    for (const auto& m : r.modes()) {
        double kl[4];
        for (int mu = 0; mu < 4; ++mu) kl[mu] = m.k.lower(static_cast<std::size_t>(mu));
        double knorm = 0.0, znorm = 0.0;
        for (int mu = 0; mu < 4; ++mu) knorm += kl[mu] * kl[mu];
        knorm = std::sqrt(knorm);
        for (int j = 0; j < 6; ++j) znorm += std::norm(m.z.component(static_cast<std::size_t>(j)));
        znorm = std::sqrt(znorm);
        if (knorm * znorm == 0.0) continue;
        for (int b = 0; b < 4; ++b) {
            std::complex<double> resid = 0.0;
            for (int a = 0; a < 4; ++a) {
                if (kl[a] == 0.0) continue;
                for (int mu = 0; mu < 4; ++mu)
                    for (int nu = 0; nu < 4; ++nu) {
                        const int sign = epsilon4(a, b, mu, nu);
                        if (sign != 0)
                            resid += double(sign) * kl[a] *
                                     m.z.lower(static_cast<std::size_t>(mu), static_cast<std::size_t>(nu));
                    }
            }
            worst = std::max(worst, std::abs(resid) / (knorm * znorm));
        }
    }
    return worst;
}

double bianchi_residual(const FieldRealization& r, const FourVector& x, double h) {
    if (h <= 0.0) throw std::invalid_argument("bianchi_residual: h must be positive");
    // central difference of d_a F_{mu nu} for each direction a
    AntisymTensor dF[4];
    for (int a = 0; a < 4; ++a) {
        FourVector xp = x, xm = x;
        xp.c[static_cast<std::size_t>(a)] += h;
        xm.c[static_cast<std::size_t>(a)] -= h;
        dF[a] = (r.evaluate(xp) + r.evaluate(xm) * -1.0) * (1.0 / (2.0 * h));
    }
    double worst = 0.0;
    for (int b = 0; b < 4; ++b) {
        double resid = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = 0; nu < 4; ++nu) {
                    const int sign = epsilon4(a, b, mu, nu);
                    if (sign != 0)
                        resid += double(sign) *
                                 dF[a].lower(static_cast<std::size_t>(mu), static_cast<std::size_t>(nu));
                }
        worst = std::max(worst, std::abs(resid));
    }
    return worst;
}

void save_realization(const FieldRealization& r, std::ostream& os) {
    nlohmann::json header;
    header["seed"] = r.seed();
    header["spectral_label"] = r.spectral_label();
    header["n_modes"] = r.modes().size();
    header["epsilon"] = r.epsilon();
    os << header.dump() << "\n";
    os.precision(17);
    for (const auto& m : r.modes()) {
        for (int i = 0; i < 4; ++i) os << m.k.c[static_cast<std::size_t>(i)] << " ";
        for (int j = 0; j < 6; ++j) {
            const auto z = m.z.component(static_cast<std::size_t>(j));
            os << z.real() << " " << z.imag() << " ";
        }
        os << m.w << "\n";
    }
}

FieldRealization load_realization(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("load_realization: missing header");
    const auto header = nlohmann::json::parse(line);
    const std::uint64_t seed = header.at("seed").get<std::uint64_t>();
    const std::string label = header.at("spectral_label").get<std::string>();
    const std::size_t n = header.at("n_modes").get<std::size_t>();
    const double epsilon = header.at("epsilon").get<double>();
    std::vector<FieldMode> modes;
    modes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(is, line))
            throw std::runtime_error("load_realization: truncated mode list");
        std::istringstream ls(line);
        FieldMode m;
        for (int j = 0; j < 4; ++j) ls >> m.k.c[static_cast<std::size_t>(j)];
        for (int j = 0; j < 6; ++j) {
            double re = 0.0, im = 0.0;
            ls >> re >> im;
            m.z.component(static_cast<std::size_t>(j)) = {re, im};
        }
        ls >> m.w;
        if (!ls) throw std::runtime_error("load_realization: malformed mode line");
        modes.push_back(m);
    }
    return FieldRealization(std::move(modes), seed, label, epsilon);
}

}  // namespace reldiff
