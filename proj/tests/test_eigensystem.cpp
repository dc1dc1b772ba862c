#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace th;

TEST_CASE("eigenvectors against closed forms")
{
    const auto& f = thtest::schnak();
    CHECK((f.eig.phi1 - oracle::phi1()).norm() < 1e-10);
    CHECK((f.eig.phi2 - oracle::phi2()).norm() < 1e-10);
    CHECK((f.eig.psi1 - oracle::psi1_raw() / oracle::psi1_normalizer()).norm() < 1e-10);
    CHECK((f.eig.psi2 - oracle::psi2_raw() / oracle::psi2_normalizer()).norm() < 1e-10);
    CHECK(f.eig.kernel_residual < 1e-10);
}

TEST_CASE("bilinear form: closed form against quadrature")
{
    const auto& f = thtest::schnak();
    Profile p;
    p.m = 2;
    CVec v(2);
    v << cd(0.3, -1), cd(2, 0.5);
    p.add(v, 2, cd(0.4, 1.1));
    p.add(v.conjugate(), 0, cd(-0.2, 0));
    AdjointProfile psi{f.eig.psi2, cd(0, f.eig.omega0)};
    cd exact = bilinear_form(f.spec, 0, psi, p);
    cd quad = bilinear_form_quadrature(f.spec, 0, psi, [&](double t) { return p.at(t); }, 64);
    CHECK(std::abs(exact - quad) < 1e-12);
}

TEST_CASE("J integral closed form")
{
    for (int p = 0; p < 4; ++p) {
        cd a(0.3, -0.7);
        cd q = 0;
        const int n = 4000;
        for (int i = 0; i < n; ++i) {
            double x = -2.0 + (i + 0.5) * 2.0 / n;
            q += std::pow(x, p) * std::exp(a * x) * (2.0 / n);
        }
        CHECK(std::abs(J_integral(p, a, 2.0) - q) < 1e-5);
    }
}

TEST_CASE("profile algebra")
{
    CVec v(1);
    v << cd(1, 2);
    Profile p = Profile::exponential(v, cd(0, 1));
    p.add(v, 1, cd(0, 1));
    p.add(Profile::exponential(v, cd(0, 1)), -1.0);
    p.compress();
    REQUIRE(p.terms.size() == 1);
    CHECK(p.terms[0].p == 1);
    double t = -0.7;
    cd expect = cd(1, 2) * t * std::exp(cd(0, t));
    CHECK(std::abs(p.at(t)[0] - expect) < 1e-14);
    cd dexp = cd(1, 2) * (1.0 + cd(0, 1) * t) * std::exp(cd(0, t));
    CHECK(std::abs(p.derivative(t)[0] - dexp) < 1e-14);
    CHECK(std::abs(p.conj().at(t)[0] - std::conj(expect)) < 1e-14);
}

TEST_CASE("null vectors and kernel errors")
{
    CMat M(2, 2);
    M << 1, 2, 2, 4;
    CVec r = null_vector(M, Side::Right);
    CHECK((M * r).norm() < 1e-12);
    CVec l = null_vector(M, Side::Left);
    CHECK((l.transpose() * M).norm() < 1e-12);
    CHECK_THROWS_WITH_AS(null_vector(CMat::Identity(2, 2), Side::Right), doctest::Contains("NoKernel"), Error);
    CHECK_THROWS_WITH_AS(null_vector(CMat::Zero(2, 2), Side::Right), doctest::Contains("MultiDimensionalKernel"),
                         Error);
}

TEST_CASE("eta integrals")
{
    const auto& f = thtest::schnak();
    EtaIntegrals e = eta_integrals(f.spec, 1);
    RMat expect = -f.spec.mu(1) * f.spec.D0 + f.spec.A[0] + f.spec.A[1];
    CHECK((e.int_deta - expect.cast<cd>()).norm() < 1e-13);
    CHECK((e.int_theta_deta + f.spec.A[1].cast<cd>()).norm() < 1e-13);
    // eigenfunctions: int d eta phi = lambda phi(0)
    CHECK(apply_eta(f.spec, 1, f.eig.phi1_profile()).norm() < 1e-12);
    CHECK((apply_eta(f.spec, 0, f.eig.phi2_profile()) - cd(0, f.eig.omega0) * f.eig.phi2).norm() < 1e-12);
}
