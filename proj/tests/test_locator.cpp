#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace th;

TEST_CASE("schnakenberg critical point against closed forms")
{
    const auto& f = thtest::schnak();
    CHECK(std::abs(f.cp.alpha_star[0] - oracle::tau_star()) < 1e-10);
    CHECK(std::abs(f.cp.alpha_star[1] - oracle::eps_star()) < 1e-12);
    CHECK(std::abs(f.cp.omega0 - oracle::omega0()) < 1e-9);
    CHECK(std::abs(f.cp.omega_physical - oracle::omega_physical()) < 1e-9);
    CHECK(f.cp.residual_k1 < 1e-10);
    CHECK(f.cp.residual_k2 < 1e-10);
}

TEST_CASE("transversality and hygiene")
{
    const auto& f = thtest::schnak();
    CHECK(std::abs(f.cp.transversality[0]) > 1e-3);
    CHECK(std::abs(f.cp.transversality[1]) > 1e-3);
    CHECK(f.cp.hygiene.ran);
    CHECK(f.cp.hygiene.rightmost_other < 0);
    // growth of the Hopf pair with tau: finite difference of the root
    ModelSpec s = schnakenberg(1, 2, 4).at(f.cp.alpha_star[0] + 1e-6, f.cp.alpha_star[1]);
    CharMatrixContext c(s, 0);
    cd l(0, f.cp.omega0);
    REQUIRE(newton_root(c, l));
    CHECK(std::abs((l.real() - 0) / 1e-6 - f.cp.dlambda_k2[0].real()) < 1e-4);
}

TEST_CASE("locate from far guesses")
{
    ParametricModel pm = schnakenberg(1, 2, 4);
    CHECK_THROWS_WITH_AS(locate(pm, 1, 0, {-0.2, 0.002, 1.5}), doctest::Contains("NoConvergence"), Error);
    CHECK_THROWS_AS(locate(pm, 1, 0, {0, 0, 1}), Error);
}

TEST_CASE("scalar heat equation has no bifurcation")
{
    ModelSpec s;
    s.m = 1;
    s.lags = {0.0};
    s.D0 = RMat::Constant(1, 1, 1.0);
    s.A = {RMat::Zero(1, 1)};
    s.dD = {RMat::Constant(1, 1, 1.0), RMat::Zero(1, 1)};
    s.dA[0] = {RMat::Zero(1, 1)};
    s.dA[1] = {RMat::Constant(1, 1, 1.0)};
    s.Q = zero_quadratic(1);
    s.C = zero_cubic(1);
    CHECK_THROWS_AS(locate(affine_family(s), 1, 0, {0.0, 0.0, 1.0}), Error);
}
