#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reldiff/dynamics.hpp"
#include "reldiff/field.hpp"
#include "reldiff/rng.hpp"

using namespace reldiff;

TEST_CASE("free motion is a straight line with constant momentum") {
    const ParticleParams pp;
    const PhasePoint start = on_shell({0, 0, 0, 0}, {0.4, -0.3, 0.2}, pp);
    const PhasePoint next = proper_step(start, ZeroField{}, 0.25, pp);
    for (int i = 0; i < 4; ++i) {
        CHECK(next.p[static_cast<std::size_t>(i)] == start.p[static_cast<std::size_t>(i)]);
        CHECK(next.x[static_cast<std::size_t>(i)] ==
              doctest::Approx(start.p[static_cast<std::size_t>(i)] * 0.25).epsilon(1e-14));
    }
    const Trajectory traj = propagate(start, ZeroField{}, {.horizon = 5.0, .step = 0.05});
    CHECK(traj.final_mass_shell_drift == doctest::Approx(0.0));
    CHECK(traj.points.back().x[1] == doctest::Approx(start.p[1] * 5.0).epsilon(1e-12));
}

TEST_CASE("constant magnetic field: transverse momentum magnitude is conserved") {
    const ParticleParams pp;
    ConstantField field;
    field.F.b = {0.0, 0.0, 1.3};
    const PhasePoint start = on_shell({0, 0, 0, 0}, {0.8, 0.0, 0.0}, pp);
    PhasePoint cur = start;
    const double dtau = 0.01;
    double max_dev = 0.0;
    for (int i = 0; i < 200; ++i) {
        cur = proper_step(cur, field, dtau, pp);
        const double pt = std::hypot(cur.p[1], cur.p[2]);
        max_dev = std::max(max_dev, std::abs(pt - 0.8));
    }
    CHECK(max_dev < 1e-12);
    // relativistic gyration: p rotates at omega = B/p0 per unit proper time
    // times p0/mc ... in proper time the rotation rate is B/(mc)
    const double angle_per_tau = 1.3 / (pp.m * pp.c);
    const double expected_angle = angle_per_tau * 200 * dtau;
    const double actual_angle = std::atan2(-cur.p[2], cur.p[1]);
    CHECK(std::fmod(std::abs(expected_angle - std::abs(actual_angle)), 2 * M_PI) ==
          doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("constant electric field reproduces hyperbolic motion") {
    const ParticleParams pp{.m = 1.0, .c = 1.0};
    const double E = 2.0;
    ConstantField field;
    field.F.e = {E, 0.0, 0.0};
    const PhasePoint start = on_shell({0, 0, 0, 0}, {0, 0, 0}, pp);
    PhasePoint cur = start;
    const double dtau = 1e-3;
    const int n = 1000;
    for (int i = 0; i < n; ++i) cur = proper_step(cur, field, dtau, pp);
    const double tau = n * dtau;
    CHECK(cur.p[0] == doctest::Approx(std::cosh(E * tau)).epsilon(1e-8));
    CHECK(cur.p[1] == doctest::Approx(std::sinh(E * tau)).epsilon(1e-8));
    // position closed form: x0 = sinh(E tau)/E, x1 = (cosh(E tau) - 1)/E
    CHECK(cur.x[0] == doctest::Approx(std::sinh(E * tau) / E).epsilon(1e-6));
    CHECK(cur.x[1] == doctest::Approx((std::cosh(E * tau) - 1.0) / E).epsilon(1e-6));
}

TEST_CASE("lab step lands exactly on the target laboratory time") {
    const ParticleParams pp;
    const SpectralDensity spec = reference_density();
    const FieldRealization real = sample_realization(spec, 128, 17, 0.1);
    PhasePoint cur = on_shell({0, 0, 0, 0}, {0.3, -0.5, 0.2}, pp);
    const double dt = 0.05;
    for (int i = 0; i < 50; ++i) {
        const double x0_before = cur.x[0];
        cur = lab_step(cur, real, dt, pp);
        CHECK(std::abs(cur.x[0] - (x0_before + dt)) <= 1e-12 * dt);
    }
    SUBCASE("free lab motion moves the spatial position by (p/p0) c dt") {
        PhasePoint st = on_shell({0, 0, 0, 0}, {0.7, 0.1, -0.2}, pp);
        const PhasePoint nx = lab_step(st, ZeroField{}, 0.2, pp);
        for (int i = 1; i < 4; ++i)
            CHECK(nx.x[static_cast<std::size_t>(i)] ==
                  doctest::Approx(st.p[static_cast<std::size_t>(i)] / st.p[0] * 0.2).epsilon(1e-12));
        CHECK(nx.p[1] == st.p[1]);
    }
}

TEST_CASE("lab-clock constant-E evolution matches the reparameterized closed form") {
    const ParticleParams pp;
    const double E = 1.5;
    ConstantField field;
    field.F.e = {E, 0.0, 0.0};
    PhasePoint cur = on_shell({0, 0, 0, 0}, {0, 0, 0}, pp);
    const double dt = 1e-3;
    const int n = 800;
    for (int i = 0; i < n; ++i) cur = lab_step(cur, field, dt, pp);
    const double x0 = n * dt;
    // invert x0(tau) = sinh(E tau)/E
    const double tau = std::asinh(E * x0) / E;
    CHECK(cur.p[0] == doctest::Approx(std::cosh(E * tau)).epsilon(1e-8));
    CHECK(cur.p[1] == doctest::Approx(std::sinh(E * tau)).epsilon(1e-8));
}

TEST_CASE("proper- and lab-clock trajectories through one field coincide") {
    const ParticleParams pp;
    const SpectralDensity spec = reference_density();
    const FieldRealization real = sample_realization(spec, 256, 23, 0.1);
    const PhasePoint start = on_shell({0, 0, 0, 0}, {0.2, 0.4, -0.1}, pp);

    const Trajectory proper = propagate(start, real, {.horizon = 2.0, .step = 1e-3});
    const Trajectory lab =
        propagate(start, real, {.horizon = 1.5, .step = 1e-3, .clock = Clock::Lab});

    // interpolate the proper trajectory to the lab samples' x0 values,
    // cubic Hermite in x0 using dx/dx0 = p/p0
    double worst = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 10; i < lab.points.size(); i += 37) {
        const double x0 = lab.points[i].x[0];
        while (j + 1 < proper.points.size() && proper.points[j + 1].x[0] < x0) ++j;
        if (j + 1 >= proper.points.size()) break;
        const auto& A = proper.points[j];
        const auto& B = proper.points[j + 1];
        const double h = B.x[0] - A.x[0];
        const double w = (x0 - A.x[0]) / h;
        const double h00 = (1 + 2 * w) * (1 - w) * (1 - w);
        const double h10 = w * (1 - w) * (1 - w);
        const double h01 = w * w * (3 - 2 * w);
        const double h11 = w * w * (w - 1);
        for (int comp = 1; comp < 4; ++comp) {
            const std::size_t ci = static_cast<std::size_t>(comp);
            const double da = A.p[ci] / A.p[0];
            const double db = B.p[ci] / B.p[0];
            const double interp = h00 * A.x[ci] + h10 * h * da + h01 * B.x[ci] + h11 * h * db;
            worst = std::max(worst, std::abs(interp - lab.points[i].x[ci]));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("momentum update converges at second order") {
    const ParticleParams pp;
    const SpectralDensity spec = reference_density();
    const FieldRealization real = sample_realization(spec, 64, 31, 0.3);
    const PhasePoint start = on_shell({0, 0, 0, 0}, {0.3, 0.1, 0.0}, pp);

    const auto endpoint = [&](double step) {
        PhasePoint cur = start;
        const int n = static_cast<int>(std::llround(1.0 / step));
        for (int i = 0; i < n; ++i) cur = proper_step(cur, real, step, pp);
        return cur;
    };
    const PhasePoint ref = endpoint(1.0 / 1024.0);
    const auto err = [&](const PhasePoint& s) {
        double e = 0.0;
        for (int i = 0; i < 4; ++i) {
            e = std::max(e, std::abs(s.x[static_cast<std::size_t>(i)] - ref.x[static_cast<std::size_t>(i)]));
            e = std::max(e, std::abs(s.p[static_cast<std::size_t>(i)] - ref.p[static_cast<std::size_t>(i)]));
        }
        return e;
    };
    const double e1 = err(endpoint(1.0 / 64.0));
    const double e2 = err(endpoint(1.0 / 128.0));
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("mass shell holds to 1e-9 over ten thousand random-field steps") {
    const ParticleParams pp;
    const SpectralDensity spec = reference_density();
    const FieldRealization real = sample_realization(spec, 128, 37, 0.1);
    const PhasePoint start = on_shell({0, 0, 0, 0}, {0.5, 0.0, 0.3}, pp);
    const Trajectory traj =
        propagate(start, real, {.horizon = 10.0, .step = 1e-3, .record = false});
    CHECK(traj.max_mass_shell_drift <= 1e-9);
    for (const auto& pt : traj.points) CHECK(pt.p[0] > 0.0);
}

TEST_CASE("propagation is bit-reproducible") {
    const ParticleParams pp;
    const SpectralDensity spec = reference_density();
    const FieldRealization real = sample_realization(spec, 64, 41, 0.1);
    const PhasePoint start = on_shell({0, 0, 0, 0}, {0.1, 0.2, 0.3}, pp);
    const Trajectory a = propagate(start, real, {.horizon = 1.0, .step = 1e-2});
    const Trajectory b = propagate(start, real, {.horizon = 1.0, .step = 1e-2});
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(a.points[i].x[static_cast<std::size_t>(j)] == b.points[i].x[static_cast<std::size_t>(j)]);
            CHECK(a.points[i].p[static_cast<std::size_t>(j)] == b.points[i].p[static_cast<std::size_t>(j)]);
        }
}

TEST_CASE("phase point validation") {
    const ParticleParams pp;
    CHECK_THROWS_AS(validate_phase_point({{0, 0, 0, 0}, {1.5, 0, 0, 0}}, pp),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_phase_point({{0, 0, 0, 0}, {-1.0, 0, 0, 0}}, pp),
                    std::invalid_argument);
    CHECK_NOTHROW(validate_phase_point(on_shell({0, 0, 0, 0}, {0.3, 0.4, 0.5}, pp), pp));
    CHECK_THROWS_AS(propagate(on_shell({0, 0, 0, 0}, {0, 0, 0}, pp), ZeroField{},
                              {.horizon = -1.0}),
                    std::invalid_argument);
}

TEST_CASE("trajectory CSV export carries the full state") {
    const ParticleParams pp;
    const Trajectory traj =
        propagate(on_shell({0, 0, 0, 0}, {0.2, 0, 0}, pp), ZeroField{}, {.horizon = 0.1, .step = 0.01});
    std::ostringstream os;
    traj.write_csv(os);
    const std::string text = os.str();
    CHECK(text.find("s,x0,x1,x2,x3,p0,p1,p2,p3") == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 12);  // header + 11 samples
}
