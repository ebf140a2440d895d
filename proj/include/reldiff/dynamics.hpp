#pragma once

#include <cmath>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "reldiff/minkowski.hpp"

namespace reldiff {

struct ParticleParams {
    double m = 1.0;
    double c = 1.0;
};

inline void validate_particle_params(const ParticleParams& pp) {
    if (!(pp.m > 0.0) || !(pp.c > 0.0))
        throw std::invalid_argument("ParticleParams: m and c must be positive");
}

struct PhasePoint {
    FourVector x;
    FourVector p;
};

inline double mass_shell_error(const FourVector& p, const ParticleParams& pp) {
    const double m2c2 = pp.m * pp.m * pp.c * pp.c;
    return std::abs(minkowski_dot(p, p) - m2c2) / m2c2;
}

inline void validate_phase_point(const PhasePoint& s, const ParticleParams& pp,
                                 double tol = 1e-9) {
    if (!(s.p.c[0] > 0.0)) throw std::invalid_argument("PhasePoint: p0 must be positive");
    if (mass_shell_error(s.p, pp) > tol)
        throw std::invalid_argument("PhasePoint: momentum off the mass shell");
}

inline PhasePoint on_shell(const FourVector& x, const std::array<double, 3>& pvec,
                           const ParticleParams& pp) {
    const double m2c2 = pp.m * pp.m * pp.c * pp.c;
    const double p0 =
        std::sqrt(m2c2 + pvec[0] * pvec[0] + pvec[1] * pvec[1] + pvec[2] * pvec[2]);
    return {x, {p0, pvec[0], pvec[1], pvec[2]}};
}

enum class Clock { Proper, Lab };

struct Trajectory {
    Clock clock = Clock::Proper;
    std::vector<double> s;  // strictly increasing clock values
    std::vector<PhasePoint> points;
    double final_mass_shell_drift = 0.0;
    double max_mass_shell_drift = 0.0;

    // CSV columns: s, x0..x3, p0..p3
    void write_csv(std::ostream& os) const;
};

// One proper-time step. The position advances by (dtau/mc) times the
// momentum at the step midpoint; the momentum is rotated by the exponential
// of the mixed-index field matrix evaluated at the predicted midpoint
// position. The update is a Lorentz transformation, so the mass shell is
// preserved to the accuracy of the matrix exponential.
template <class Field>
PhasePoint proper_step(const PhasePoint& st, Field&& field, double dtau,
                       const ParticleParams& pp) {
    const double imc = 1.0 / (pp.m * pp.c);
    const FourVector x_half = st.x + st.p * (0.5 * dtau * imc);
    const Mat4 A = mixed_matrix(field(x_half)) * (dtau * imc);
    const Mat4 E_half = expm(A * 0.5);
    const FourVector p_mid = E_half.apply(st.p);
    PhasePoint out;
    out.x = st.x + p_mid * (dtau * imc);
    out.p = E_half.apply(p_mid);
    return out;
}

// One laboratory-time step: a proper-time step with dtau = mc dx0 / p0
// evaluated at the midpoint, then secant refinement in dtau until the step
// lands on the target x0 within 1e-12 * dx0.
template <class Field>
PhasePoint lab_step(const PhasePoint& st, Field&& field, double dt, const ParticleParams& pp) {
    const double dx0 = pp.c * dt;
    const double target = st.x.c[0] + dx0;
    double dtau = pp.m * pp.c * dx0 / st.p.c[0];
    const PhasePoint half = proper_step(st, field, 0.5 * dtau, pp);
    dtau = pp.m * pp.c * dx0 / half.p.c[0];

    PhasePoint cur = proper_step(st, field, dtau, pp);
    double t_prev = 0.0, f_prev = -dx0;
    double t_cur = dtau, f_cur = cur.x.c[0] - target;
    const double tol = 1e-12 * dx0;
    for (int it = 0; it < 8 && std::abs(f_cur) > tol; ++it) {
        const double t_next = t_cur - f_cur * (t_cur - t_prev) / (f_cur - f_prev);
        t_prev = t_cur;
        f_prev = f_cur;
        t_cur = t_next;
        cur = proper_step(st, field, t_cur, pp);
        f_cur = cur.x.c[0] - target;
    }
    return cur;
}

struct PropagateOptions {
    double horizon = 1.0;
    double step = 1e-2;
    Clock clock = Clock::Proper;
    ParticleParams particle{};
    double shell_tolerance = 1e-6;  // relative p^2 drift treated as failure
    bool record = true;             // keep every sample in the trajectory
};

// Fixed-step propagation recording every sample. Throws
// std::runtime_error("integrator tolerance exceeded") when the relative mass
// shell drift passes the tolerance.
template <class Field>
Trajectory propagate(const PhasePoint& start, Field&& field, const PropagateOptions& opt) {
    if (!(opt.horizon > 0.0) || !(opt.step > 0.0))
        throw std::invalid_argument("propagate: horizon and step must be positive");
    validate_particle_params(opt.particle);
    validate_phase_point(start, opt.particle);

    const int n = static_cast<int>(std::llround(opt.horizon / opt.step));
    Trajectory traj;
    traj.clock = opt.clock;
    if (opt.record) {
        traj.s.reserve(static_cast<std::size_t>(n) + 1);
        traj.points.reserve(static_cast<std::size_t>(n) + 1);
        traj.s.push_back(0.0);
        traj.points.push_back(start);
    }
    PhasePoint cur = start;
    double drift = 0.0;
    for (int k = 1; k <= n; ++k) {
        cur = (opt.clock == Clock::Proper) ? proper_step(cur, field, opt.step, opt.particle)
                                           : lab_step(cur, field, opt.step, opt.particle);
        drift = mass_shell_error(cur.p, opt.particle);
        traj.max_mass_shell_drift = std::max(traj.max_mass_shell_drift, drift);
        if (drift > opt.shell_tolerance || !(cur.p.c[0] > 0.0))
            throw std::runtime_error("integrator tolerance exceeded");
        if (opt.record) {
            traj.s.push_back(opt.step * k);
            traj.points.push_back(cur);
        }
    }
    traj.final_mass_shell_drift = drift;
    if (!opt.record) {
        traj.s.push_back(opt.step * n);
        traj.points.push_back(cur);
    }
    return traj;
}

// uniform constant field and the zero field, for tests and closed forms
struct ConstantField {
    AntisymTensor F;
    AntisymTensor operator()(const FourVector&) const { return F; }
};

struct ZeroField {
    AntisymTensor operator()(const FourVector&) const { return {}; }
};

}  // namespace reldiff
