#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "th/simulator.hpp"

using namespace th;

namespace {

PdeSystem heat(double D)
{
    PdeSystem p;
    p.m = 1;
    p.length = 1;
    p.lags = {0.0};
    p.diffusion = RVec::Constant(1, D);
    p.steady = RVec::Zero(1);
    p.reaction = [](const std::vector<RMat>& u, RMat& out) { out.setZero(u[0].rows(), u[0].cols()); };
    return p;
}

// scalar delayed logistic-type equation around 0
PdeSystem delayed_scalar(double lag)
{
    PdeSystem p;
    p.m = 1;
    p.length = 2;
    p.lags = {0.0, lag};
    p.diffusion = RVec::Constant(1, 0.05);
    p.steady = RVec::Zero(1);
    p.reaction = [](const std::vector<RMat>& u, RMat& out) {
        out = 0.3 * u[0] - 0.8 * u[1] - u[0].array().cube().matrix();
    };
    return p;
}

RMat final_at(const PdeSystem& p, double dt, double T)
{
    SimConfig c;
    c.N = 64;
    c.dt = dt;
    c.T = T;
    c.noise = 0.2;
    c.seed = 7;
    return integrate(p, c).final_field;
}

double richardson(const PdeSystem& p, double dt, double T)
{
    RMat a = final_at(p, dt, T), b = final_at(p, dt / 2, T), c = final_at(p, dt / 4, T);
    return (a - b).norm() / (b - c).norm();
}

const thtest::Schnak& sc() { return thtest::schnak(); }

Trajectory run_region(int region, double T, uint64_t seed)
{
    const auto& f = sc();
    RegionReport rr = region_inventory(f.sys, f.cp, case3_sample(f.sys, region, 0.01));
    SimConfig c;
    c.T = T;
    c.seed = seed;
    return integrate(f.pm.pde(rr.raw[0], rr.raw[1]), c);
}

} // namespace

TEST_CASE("heat equation is integrated exactly and conserves the mean")
{
    PdeSystem p = heat(0.1);
    SimConfig c;
    c.N = 64;
    c.T = 5;
    c.noise = 0.1;
    c.seed = 3;
    Trajectory tr = integrate(p, c);
    REQUIRE(tr.t.size() > 10);
    double prev = INFINITY;
    for (size_t i = 0; i < tr.t.size(); ++i) {
        double var = 0;
        for (int k = 1; k < tr.modes[i].rows(); ++k) var += tr.modes[i](k, 0) * tr.modes[i](k, 0);
        CHECK(var <= prev * (1 + 1e-14));
        prev = var;
        CHECK(tr.modes[i](0, 0) == doctest::Approx(tr.modes[0](0, 0)).epsilon(1e-12));
    }
    // mode k decays like exp(-D (k pi / L)^2 t)
    const size_t j = tr.t.size() - 1;
    for (int k = 1; k <= 3; ++k) {
        double ratio = tr.modes[j](k, 0) / tr.modes[0](k, 0);
        double dtt = tr.t[j] - tr.t[0];
        CHECK(ratio == doctest::Approx(std::exp(-0.1 * k * k * M_PI * M_PI * dtt)).epsilon(1e-9));
    }
}

TEST_CASE("constant state is homogeneous steady")
{
    PdeSystem p = heat(1);
    SimConfig c;
    c.T = 2;
    c.noise = 0;
    Trajectory tr = integrate(p, c);
    CHECK(tr.final_field.cwiseAbs().maxCoeff() == 0.0);
    CHECK(classify_attractor(tr).kind == AttractorKind::HomogeneousSteady);
}

TEST_CASE("second order in time, lag on and off the grid")
{
    // aligned: lag is a multiple of every step
    double r1 = richardson(delayed_scalar(1.0), 1.0 / 16, 4);
    CHECK(r1 > 3.5);
    CHECK(r1 < 4.5);
    // misaligned lag goes through the history interpolant
    double r2 = richardson(delayed_scalar(0.73), 1.0 / 20, 4);
    CHECK(r2 > 3.5);
    CHECK(r2 < 4.5);
}

TEST_CASE("zero flux at both ends")
{
    Trajectory tr = integrate(delayed_scalar(1.0), [] {
        SimConfig c;
        c.N = 128;
        c.T = 6;
        c.noise = 0.3;
        c.seed = 11;
        return c;
    }());
    const RMat& u = tr.final_field;
    const int N = static_cast<int>(u.rows());
    const double dx = tr.length / N;
    double interior = 0;
    for (int i = 0; i + 1 < N; ++i) interior = std::max(interior, std::abs(u(i + 1, 0) - u(i, 0)) / dx);
    REQUIRE(interior > 1e-3);
    // one-sided quadratic through the first three cell centres
    double left = (-2 * u(0, 0) + 3 * u(1, 0) - u(2, 0)) / dx;
    double right = (-2 * u(N - 1, 0) + 3 * u(N - 2, 0) - u(N - 3, 0)) / dx;
    CHECK(std::abs(left) < 1e-3 * interior);
    CHECK(std::abs(right) < 1e-3 * interior);
}

TEST_CASE("schnakenberg D1 relaxes to the constant state")
{
    Trajectory tr = run_region(1, 300, 1);
    CHECK(classify_attractor(tr).kind == AttractorKind::HomogeneousSteady);
    double dev = 0;
    for (int i = 0; i < tr.final_field.rows(); ++i)
        dev = std::max(dev, (tr.final_field.row(i).transpose() - tr.steady).cwiseAbs().maxCoeff());
    CHECK(dev < 1e-5);
}

TEST_CASE("schnakenberg D2 oscillates near the Hopf frequency")
{
    const auto& f = sc();
    Trajectory tr = run_region(2, 400, 2);
    AttractorClass ac = classify_attractor(tr);
    CHECK(ac.kind == AttractorKind::HomogeneousPeriodic);
    double fstar = f.cp.omega_physical / (2 * M_PI);
    CHECK(std::abs(ac.frequency - fstar) < 0.1 * fstar);
}

TEST_CASE("schnakenberg D6 settles on a mode-1 pattern")
{
    Trajectory tr = run_region(6, 400, 6);
    AttractorClass ac = classify_attractor(tr);
    CHECK(ac.kind == AttractorKind::InhomogeneousSteady);
    CHECK(ac.dominant_mode == 1);
}

TEST_CASE("csv writers")
{
    SimConfig c;
    c.T = 1;
    c.snapshot_every = 50;
    Trajectory tr = integrate(heat(1), c);
    std::string m = modes_csv(tr), s = snapshots_csv(tr);
    CHECK(m.rfind("t,s0_k0,", 0) == 0);
    CHECK(std::count(m.begin(), m.end(), '\n') == static_cast<long>(tr.t.size() + 1));
    CHECK(!s.empty());
}

TEST_CASE("schnakenberg mass balance d/dt mean(u + v) = a + b - mean(u)")
{
    const auto& f = sc();
    RegionReport rr = region_inventory(f.sys, f.cp, case3_sample(f.sys, 2, 0.01));
    SimConfig c;
    c.T = 10;
    c.seed = 5;
    c.snapshot_every = 1;
    Trajectory tr = integrate(f.pm.pde(rr.raw[0], rr.raw[1]), c);
    REQUIRE(tr.snapshots.size() > 100);
    double worst = 0, acc = 0;
    const double m0 = tr.snapshots[0].sum() / tr.N;
    for (size_t i = 1; i < tr.snapshots.size(); ++i) {
        double r0 = 3 - tr.snapshots[i - 1].col(0).mean(), r1 = 3 - tr.snapshots[i].col(0).mean();
        acc += 0.5 * (r0 + r1) * (tr.snap_t[i] - tr.snap_t[i - 1]);
        worst = std::max(worst, std::abs(tr.snapshots[i].sum() / tr.N - m0 - acc));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("a step that does not divide the lag leaves the settled tail unchanged")
{
    const auto& f = sc();
    RegionReport rr = region_inventory(f.sys, f.cp, case3_sample(f.sys, 6, 0.01));
    PdeSystem p = f.pm.pde(rr.raw[0], rr.raw[1]);
    SimConfig c;
    c.T = 400;
    c.seed = 9;
    c.dt = rr.raw[0] / 64;
    AttractorClass a = classify_attractor(integrate(p, c));
    c.dt = rr.raw[0] / 60.5;
    AttractorClass b = classify_attractor(integrate(p, c));
    REQUIRE(a.amplitudes.size() == b.amplitudes.size());
    REQUIRE(a.amplitudes[1] > 1e-3);
    for (size_t k = 0; k < a.amplitudes.size(); ++k) CHECK(std::abs(a.amplitudes[k] - b.amplitudes[k]) < 1e-6);
}

TEST_CASE("ring-down is not read as an orbit")
{
    auto synthetic = [](double rate) {
        Trajectory tr;
        tr.m = 1;
        tr.N = 32;
        tr.steady = RVec::Zero(1);
        for (int i = 0; i < 4000; ++i) {
            double t = 0.05 * i;
            RMat md = RMat::Zero(8, 1);
            md(0, 0) = 0.1 * std::exp(-rate * t) * std::sin(2 * M_PI * 0.7 * t);
            tr.t.push_back(t);
            tr.modes.push_back(md);
        }
        return tr;
    };
    AttractorClass sustained = classify_attractor(synthetic(0));
    CHECK(sustained.kind == AttractorKind::HomogeneousPeriodic);
    CHECK(sustained.frequency == doctest::Approx(0.7).epsilon(0.02));
    CHECK(classify_attractor(synthetic(0.02)).kind == AttractorKind::Unresolved);
    CHECK(classify_attractor(synthetic(0.2)).kind == AttractorKind::HomogeneousSteady);
}
