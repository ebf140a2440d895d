#include "reldiff/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "reldiff/field.hpp"
#include "reldiff/numerics.hpp"
#include "reldiff/rng.hpp"

namespace reldiff {

SpectralDensity FieldConfig::make() const {
    if (density == "reference") return reference_density(lambda, k_max);
    if (density == "spacelike-test") return spacelike_test_density(k_max);
    throw std::invalid_argument("unknown spectral density: " + density);
}

void ExperimentConfig::validate() const {
    if (particles < 1 || checkpoints < 1 || field.n_modes < 1)
        throw std::invalid_argument("ExperimentConfig: counts must be >= 1");
    if (!(horizon > 0.0) || !(step > 0.0) || horizon / step < 10.0)
        throw std::invalid_argument("ExperimentConfig: horizon/step must be >= 10");
    validate_particle_params(particle);
}

void DiffusionRunConfig::validate() const {
    if (walkers < 1 || checkpoints < 1)
        throw std::invalid_argument("DiffusionRunConfig: counts must be >= 1");
    if (!(horizon > 0.0) || !(step > 0.0) || horizon / step < 10.0)
        throw std::invalid_argument("DiffusionRunConfig: horizon/step must be >= 10");
    validate_diffusion_params(params);
}

namespace {

// accumulators for the 11 moment channels at every checkpoint
struct MomentAccumulator {
    std::vector<std::array<Welford, 11>> cp;
    Histogram hist_pabs;
    Histogram hist_p0;
    int failed = 0;

    MomentAccumulator(std::size_t checkpoints, const Histogram& pabs_template,
                      const Histogram& p0_template)
        : cp(checkpoints), hist_pabs(pabs_template), hist_p0(p0_template) {}

    void add_sample(std::size_t checkpoint, const std::array<double, 3>& p, double p0) {
        auto& w = cp[checkpoint];
        w[0].add(p[0]);
        w[1].add(p[1]);
        w[2].add(p[2]);
        w[3].add(p[0] * p[0]);
        w[4].add(p[1] * p[1]);
        w[5].add(p[2] * p[2]);
        w[6].add(p[0] * p[1]);
        w[7].add(p[0] * p[2]);
        w[8].add(p[1] * p[2]);
        w[9].add(p0);
        w[10].add(p0 * p0);
    }

    void merge(const MomentAccumulator& o) {
        for (std::size_t i = 0; i < cp.size(); ++i)
            for (int j = 0; j < 11; ++j) cp[i][static_cast<std::size_t>(j)].merge(o.cp[i][static_cast<std::size_t>(j)]);
        hist_pabs.merge(o.hist_pabs);
        hist_p0.merge(o.hist_p0);
        failed += o.failed;
    }
};

MomentTable table_from(const std::vector<std::array<Welford, 11>>& cp,
                       const std::vector<double>& s) {
    MomentTable t;
    t.s = s;
    const std::size_t n = cp.size();
    for (int j = 0; j < 3; ++j) {
        t.mean_p[static_cast<std::size_t>(j)].resize(n);
        t.se_p[static_cast<std::size_t>(j)].resize(n);
    }
    for (int j = 0; j < 6; ++j) {
        t.mean_pp[static_cast<std::size_t>(j)].resize(n);
        t.se_pp[static_cast<std::size_t>(j)].resize(n);
    }
    t.mean_p0.resize(n);
    t.se_p0.resize(n);
    t.mean_p0p0.resize(n);
    t.se_p0p0.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < 3; ++j) {
            t.mean_p[static_cast<std::size_t>(j)][i] = cp[i][static_cast<std::size_t>(j)].mean();
            t.se_p[static_cast<std::size_t>(j)][i] = cp[i][static_cast<std::size_t>(j)].standard_error();
        }
        for (int j = 0; j < 6; ++j) {
            t.mean_pp[static_cast<std::size_t>(j)][i] = cp[i][static_cast<std::size_t>(j + 3)].mean();
            t.se_pp[static_cast<std::size_t>(j)][i] = cp[i][static_cast<std::size_t>(j + 3)].standard_error();
        }
        t.mean_p0[i] = cp[i][9].mean();
        t.se_p0[i] = cp[i][9].standard_error();
        t.mean_p0p0[i] = cp[i][10].mean();
        t.se_p0p0[i] = cp[i][10].standard_error();
    }
    return t;
}

std::vector<std::pair<int, int>> partition(int count, int workers) {
    std::vector<std::pair<int, int>> parts;
    const int w = std::max(1, workers);
    for (int i = 0; i < w; ++i) {
        const int lo = static_cast<int>(static_cast<long long>(count) * i / w);
        const int hi = static_cast<int>(static_cast<long long>(count) * (i + 1) / w);
        if (hi > lo) parts.emplace_back(lo, hi);
    }
    return parts;
}

}  // namespace

MomentReport run_field_ensemble(const ExperimentConfig& cfg, const RunContext& ctx) {
    cfg.validate();
    const SpectralDensity spec = cfg.field.make();
    const int steps = static_cast<int>(std::llround(cfg.horizon / cfg.step));
    const int per_cp = std::max(1, steps / cfg.checkpoints);
    std::vector<int> cp_steps;
    std::vector<double> cp_s;
    for (int k = per_cp; k <= steps; k += per_cp) {
        cp_steps.push_back(k);
        cp_s.push_back(k * cfg.step);
    }

    const double mc = cfg.particle.m * cfg.particle.c;
    const double p0_guess = std::sqrt(mc * mc + cfg.initial_p[0] * cfg.initial_p[0] +
                                      cfg.initial_p[1] * cfg.initial_p[1] +
                                      cfg.initial_p[2] * cfg.initial_p[2]);
    // generous histogram ranges around the expected spread
    const Histogram pabs_template(0.0, 6.0 * p0_guess, 60);
    const Histogram p0_template(0.0, 8.0 * p0_guess, 60);

    const auto parts = partition(cfg.particles, ctx.workers);
    std::vector<MomentAccumulator> accs(parts.size(),
                                        MomentAccumulator(cp_steps.size(), pabs_template, p0_template));

    auto work = [&](std::size_t part_idx) {
        auto& acc = accs[part_idx];
        for (int particle = parts[part_idx].first; particle < parts[part_idx].second; ++particle) {
            const std::uint64_t tag = (cfg.experiment_ordinal << 40) | static_cast<std::uint64_t>(particle);
            FieldRealization real =
                sample_realization(spec, cfg.field.n_modes, cfg.master_seed, cfg.field.epsilon, nullptr, tag);
            PhasePoint state = on_shell({0, 0, 0, 0}, cfg.initial_p, cfg.particle);
            bool failed = false;
            std::size_t next_cp = 0;
            for (int k = 1; k <= steps && !failed; ++k) {
                try {
                    state = (cfg.clock == Clock::Proper)
                                ? proper_step(state, real, cfg.step, cfg.particle)
                                : lab_step(state, real, cfg.step, cfg.particle);
                    if (mass_shell_error(state.p, cfg.particle) > 1e-6 || !(state.p.c[0] > 0.0))
                        throw std::runtime_error("integrator tolerance exceeded");
                } catch (const std::exception&) {
                    failed = true;
                    break;
                }
                if (next_cp < cp_steps.size() && k == cp_steps[next_cp]) {
                    acc.add_sample(next_cp, {state.p.c[1], state.p.c[2], state.p.c[3]}, state.p.c[0]);
                    ++next_cp;
                }
            }
            if (failed) {
                ++acc.failed;
                continue;
            }
            const double pabs = std::sqrt(state.p.c[1] * state.p.c[1] + state.p.c[2] * state.p.c[2] +
                                          state.p.c[3] * state.p.c[3]);
            acc.hist_pabs.add(pabs);
            acc.hist_p0.add(state.p.c[0]);
        }
    };

    if (parts.size() == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < parts.size(); ++i) pool.emplace_back(work, i);
        for (auto& th : pool) th.join();
    }

    MomentAccumulator total = accs.front();
    for (std::size_t i = 1; i < accs.size(); ++i) total.merge(accs[i]);

    MomentReport rep;
    rep.table = table_from(total.cp, cp_s);
    rep.hist_pabs = total.hist_pabs;
    rep.hist_p0 = total.hist_p0;
    rep.n_particles = cfg.particles;
    rep.failed_trajectories = total.failed;
    rep.invalid = total.failed > 0.001 * cfg.particles;
    return rep;
}

MomentReport run_diffusion_ensemble(const DiffusionRunConfig& cfg, const RunContext& ctx) {
    cfg.validate();
    const int steps = static_cast<int>(std::llround(cfg.horizon / cfg.step));
    const int per_cp = std::max(1, steps / cfg.checkpoints);
    std::vector<int> cp_steps;
    std::vector<double> cp_s;
    for (int k = per_cp; k <= steps; k += per_cp) {
        cp_steps.push_back(k);
        cp_s.push_back(k * cfg.step);
    }

    const double mc = cfg.params.particle.m * cfg.params.particle.c;
    const Histogram pabs_template(0.0, 12.0 * mc, 60);
    const Histogram p0_template(0.0, 14.0 * mc, 60);

    // precomputed per-step SDE increments under the optional clock map
    std::vector<double> ds(static_cast<std::size_t>(steps), cfg.step);
    if (cfg.clock_map) {
        for (int k = 0; k < steps; ++k) {
            const double d = cfg.clock_map((k + 1) * cfg.step) - cfg.clock_map(k * cfg.step);
            if (d < 0.0)
                throw std::invalid_argument("run_diffusion_ensemble: clock map must be nondecreasing");
            ds[static_cast<std::size_t>(k)] = d;
        }
    }

    const auto parts = partition(cfg.walkers, ctx.workers);
    std::vector<MomentAccumulator> accs(parts.size(),
                                        MomentAccumulator(cp_steps.size(), pabs_template, p0_template));

    auto work = [&](std::size_t part_idx) {
        auto& acc = accs[part_idx];
        for (int walker = parts[part_idx].first; walker < parts[part_idx].second; ++walker) {
            const std::uint64_t tag = (cfg.experiment_ordinal << 40) | static_cast<std::uint64_t>(walker);
            RandomStream rng(cfg.master_seed, stream_id(StreamDomain::SdeWalker, tag));
            MomentumState st;
            st.p = cfg.initial_p;
            std::size_t next_cp = 0;
            for (int k = 1; k <= steps; ++k) {
                const double d = ds[static_cast<std::size_t>(k - 1)];
                if (d > 0.0) {
                    const std::array<double, 3> noise{rng.normal(), rng.normal(), rng.normal()};
                    st = sde_step(st, cfg.params, d, noise);
                } else {
                    rng.normal();
                    rng.normal();
                    rng.normal();
                }
                if (next_cp < cp_steps.size() && k == cp_steps[next_cp]) {
                    acc.add_sample(next_cp, st.p, st.p0(cfg.params.particle));
                    ++next_cp;
                }
            }
            const double pabs =
                std::sqrt(st.p[0] * st.p[0] + st.p[1] * st.p[1] + st.p[2] * st.p[2]);
            acc.hist_pabs.add(pabs);
            acc.hist_p0.add(st.p0(cfg.params.particle));
        }
    };

    if (parts.size() == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < parts.size(); ++i) pool.emplace_back(work, i);
        for (auto& th : pool) th.join();
    }

    MomentAccumulator total = accs.front();
    for (std::size_t i = 1; i < accs.size(); ++i) total.merge(accs[i]);

    MomentReport rep;
    rep.table = table_from(total.cp, cp_s);
    rep.hist_pabs = total.hist_pabs;
    rep.hist_p0 = total.hist_p0;
    rep.n_particles = cfg.walkers;
    return rep;
}

void MomentReport::write_moments_csv(std::ostream& os) const {
    os << "s,p1,p2,p3,p11,p22,p33,p12,p13,p23,p0,p00,"
          "se_p1,se_p2,se_p3,se_p11,se_p22,se_p33,se_p12,se_p13,se_p23,se_p0,se_p00\n";
    os.precision(17);
    const auto& t = table;
    for (std::size_t i = 0; i < t.s.size(); ++i) {
        os << t.s[i];
        for (int j = 0; j < 3; ++j) os << "," << t.mean_p[static_cast<std::size_t>(j)][i];
        for (int j = 0; j < 6; ++j) os << "," << t.mean_pp[static_cast<std::size_t>(j)][i];
        os << "," << t.mean_p0[i] << "," << t.mean_p0p0[i];
        for (int j = 0; j < 3; ++j) os << "," << t.se_p[static_cast<std::size_t>(j)][i];
        for (int j = 0; j < 6; ++j) os << "," << t.se_pp[static_cast<std::size_t>(j)][i];
        os << "," << t.se_p0[i] << "," << t.se_p0p0[i];
        os << "\n";
    }
}

void write_histogram_csv(const Histogram& h, std::ostream& os) {
    os << "lo,hi,count\n";
    os.precision(17);
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        os << h.edges[i] << "," << h.edges[i + 1] << "," << h.counts[i] << "\n";
}

namespace {

void compare_channel(const std::string& name, const std::vector<double>& s,
                     const std::vector<double>& ma, const std::vector<double>& sa,
                     const std::vector<double>& mb, const std::vector<double>& sb,
                     const TolerancePolicy& pol, CompareResult& out) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        MomentComparison row;
        row.moment = name;
        row.s = s[i];
        row.a = ma[i];
        row.b = mb[i];
        row.combined_se = std::sqrt(sa[i] * sa[i] + sb[i] * sb[i]);
        const double diff = std::abs(ma[i] - mb[i]);
        row.z = diff / std::max(row.combined_se, 1e-300);
        const double scale = std::max({std::abs(ma[i]), std::abs(mb[i]), pol.scale_floor});
        row.pass = diff <= pol.z_max * row.combined_se + pol.systematic_rel * scale;
        if (!row.pass) out.pass = false;
        if (row.z > out.worst_z) {
            out.worst_z = row.z;
            out.worst_moment = name;
        }
        out.rows.push_back(std::move(row));
    }
}

}  // namespace

CompareResult compare_reports(const MomentReport& a, const MomentReport& b,
                              const TolerancePolicy& policy) {
    const auto& ta = a.table;
    const auto& tb = b.table;
    if (ta.s.size() != tb.s.size())
        throw std::invalid_argument("compare_reports: mismatched checkpoint grids");
    for (std::size_t i = 0; i < ta.s.size(); ++i)
        if (std::abs(ta.s[i] - tb.s[i]) > 1e-9 * (1.0 + std::abs(ta.s[i])))
            throw std::invalid_argument("compare_reports: mismatched checkpoint grids");

    CompareResult out;
    static const char* kP[3] = {"p1", "p2", "p3"};
    static const char* kPP[6] = {"p11", "p22", "p33", "p12", "p13", "p23"};
    for (int j = 0; j < 3; ++j)
        compare_channel(kP[j], ta.s, ta.mean_p[static_cast<std::size_t>(j)], ta.se_p[static_cast<std::size_t>(j)],
                        tb.mean_p[static_cast<std::size_t>(j)], tb.se_p[static_cast<std::size_t>(j)], policy, out);
    for (int j = 0; j < 6; ++j)
        compare_channel(kPP[j], ta.s, ta.mean_pp[static_cast<std::size_t>(j)], ta.se_pp[static_cast<std::size_t>(j)],
                        tb.mean_pp[static_cast<std::size_t>(j)], tb.se_pp[static_cast<std::size_t>(j)], policy, out);
    compare_channel("p0", ta.s, ta.mean_p0, ta.se_p0, tb.mean_p0, tb.se_p0, policy, out);
    compare_channel("p00", ta.s, ta.mean_p0p0, ta.se_p0p0, tb.mean_p0p0, tb.se_p0p0, policy, out);
    return out;
}

std::vector<double> juttner_bin_masses(const Histogram& h, const ParticleParams& pp,
                                       double beta_c) {
    const double mc = pp.m * pp.c;
    const auto dens = [&](double p0) {
        if (p0 <= mc) return 0.0;
        return p0 * std::sqrt(p0 * p0 - mc * mc) * std::exp(-beta_c * p0);
    };
    const double hi = mc + 50.0 / beta_c;
    const double norm = integrate_adaptive(dens, mc, hi);
    std::vector<double> mass(h.counts.size(), 0.0);
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const double lo = std::max(h.edges[i], mc);
        const double up = std::min(h.edges[i + 1], hi);
        if (up > lo) mass[i] = integrate_adaptive(dens, lo, up) / norm;
    }
    return mass;
}

double juttner_mean_p0(const ParticleParams& pp, double beta_c) {
    const double mc = pp.m * pp.c;
    const auto dens = [&](double p0) {
        if (p0 <= mc) return 0.0;
        return p0 * std::sqrt(p0 * p0 - mc * mc) * std::exp(-beta_c * p0);
    };
    const double hi = mc + 60.0 / beta_c;
    const double norm = integrate_adaptive(dens, mc, hi);
    const double first = integrate_adaptive([&](double p0) { return p0 * dens(p0); }, mc, hi);
    return first / norm;
}

EquilibrationResult run_juttner_equilibration(const EquilibrationConfig& cfg,
                                              const RunContext& ctx) {
    const double mc = cfg.particle.m * cfg.particle.c;
    DiffusionParams dp;
    dp.kappa2 = cfg.kappa2;
    dp.particle = cfg.particle;
    dp.kind = DiffusionKind::JuttnerLab;
    validate_diffusion_params(dp);

    const int check_every = std::max(1, static_cast<int>(std::llround(1.0 / cfg.step)));
    const int max_steps = static_cast<int>(std::llround(cfg.horizon_cap / cfg.step));
    const Histogram hist_template(cfg.hist_lo * mc, cfg.hist_hi * mc, cfg.bins);
    const auto target_mass = juttner_bin_masses(hist_template, cfg.particle, 1.0 / mc);

    const auto parts = partition(cfg.walkers, ctx.workers);
    std::vector<std::vector<MomentumState>> states(parts.size());
    std::vector<std::vector<RandomStream>> rngs(parts.size());
    for (std::size_t w = 0; w < parts.size(); ++w) {
        for (int i = parts[w].first; i < parts[w].second; ++i) {
            states[w].push_back(MomentumState{});
            const std::uint64_t tag = (cfg.experiment_ordinal << 40) | static_cast<std::uint64_t>(i);
            rngs[w].emplace_back(cfg.master_seed, stream_id(StreamDomain::SdeWalker, tag));
        }
    }

    auto sweep = [&](std::size_t w, int nsteps) {
        auto& st = states[w];
        auto& rg = rngs[w];
        for (std::size_t i = 0; i < st.size(); ++i) {
            MomentumState s = st[i];
            for (int k = 0; k < nsteps; ++k) {
                const std::array<double, 3> noise{rg[i].normal(), rg[i].normal(), rg[i].normal()};
                s = sde_step(s, dp, cfg.step, noise);
            }
            st[i] = s;
        }
    };

    EquilibrationResult res;
    std::vector<double> distances;
    int done = 0;
    while (done < max_steps) {
        const int chunk = std::min(check_every, max_steps - done);
        if (parts.size() == 1) {
            sweep(0, chunk);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < parts.size(); ++w) pool.emplace_back(sweep, w, chunk);
            for (auto& th : pool) th.join();
        }
        done += chunk;

        Histogram h = hist_template;
        for (const auto& part : states)
            for (const auto& s : part) h.add(s.p0(cfg.particle));
        const auto chi = chi_square_test(h.counts, target_mass, cfg.level);
        distances.push_back(chi.statistic);
        // mixing heuristic: relative change of the distance across the
        // trailing 20 % of the run below 10 %
        const std::size_t lag = std::max<std::size_t>(1, distances.size() / 5);
        if (distances.size() >= 5 && done * cfg.step >= 5.0) {
            const double now = distances.back();
            const double before = distances[distances.size() - 1 - lag];
            if (std::abs(now - before) <= 0.1 * std::max(now, 1.0)) {
                res.mixed = true;
                break;
            }
        }
    }
    res.elapsed = done * cfg.step;

    Histogram h = hist_template;
    for (const auto& part : states)
        for (const auto& s : part) h.add(s.p0(cfg.particle));
    res.hist_p0 = h;
    res.chi_target = chi_square_test(h.counts, target_mass, cfg.level);
    const auto control_mass = juttner_bin_masses(hist_template, cfg.particle, 0.5 / mc);
    res.chi_control = chi_square_test(h.counts, control_mass, cfg.level);
    res.pass = res.chi_target.pass && !res.chi_control.pass;
    return res;
}

LabVsProperResult lab_vs_proper_discrepancy(const LabVsProperConfig& cfg, const RunContext& ctx) {
    LabVsProperResult res;
    DiffusionRunConfig lab;
    lab.name = "lab";
    lab.params.kappa2 = cfg.kappa2;
    lab.params.particle = cfg.particle;
    lab.params.kind = cfg.swap_kinds ? DiffusionKind::SchayDudleyProper : DiffusionKind::JuttnerLab;
    lab.walkers = cfg.walkers;
    lab.horizon = cfg.horizon;
    lab.step = cfg.step;
    lab.checkpoints = cfg.checkpoints;
    lab.master_seed = cfg.master_seed;
    lab.experiment_ordinal = cfg.experiment_ordinal;

    DiffusionRunConfig prop = lab;
    prop.name = "proper";
    prop.params.kind = cfg.swap_kinds ? DiffusionKind::JuttnerLab : DiffusionKind::SchayDudleyProper;
    prop.experiment_ordinal = cfg.experiment_ordinal + 1;

    res.lab = run_diffusion_ensemble(lab, ctx);
    res.proper = run_diffusion_ensemble(prop, ctx);

    const double mc = cfg.particle.m * cfg.particle.c;
    res.juttner_mean = juttner_mean_p0(cfg.particle, 1.0 / mc);

    const auto& lt = res.lab.table;
    const auto& pt = res.proper.table;
    const std::size_t nl = lt.s.size();
    const double final_lab = lt.mean_p0[nl - 1];
    const double mid_lab = lt.mean_p0[nl / 2];
    const double se_comb = std::sqrt(lt.se_p0[nl - 1] * lt.se_p0[nl - 1] +
                                     lt.se_p0[nl / 2] * lt.se_p0[nl / 2]);
    const bool flat = std::abs(final_lab - mid_lab) <= 5.0 * se_comb + 0.02 * final_lab;
    const bool near_juttner =
        std::abs(final_lab - res.juttner_mean) <= 5.0 * lt.se_p0[nl - 1] + 0.02 * res.juttner_mean;
    res.lab_saturated = flat && near_juttner;
    res.proper_grew = pt.mean_p0[pt.s.size() - 1] > 10.0 * mc;
    res.pass = res.lab_saturated && res.proper_grew;
    return res;
}

std::string file_checksum(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("file_checksum: cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (f.read(buf, sizeof(buf)) || f.gcount() > 0) {
        const std::streamsize n = f.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!f) break;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace reldiff
