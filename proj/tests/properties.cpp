#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "property_checks.hpp"

using namespace thtest;

constexpr uint64_t kSeed = 0x5eed;

TEST_CASE("bilinear normalization on random critical models")
{
    CHECK(normalization_residual(kSeed, 4) < 1e-12);
}

TEST_CASE("h boundary and interior residuals")
{
    CHECK(h_residual(kSeed + 1, 4) < 1e-9);
}

TEST_CASE("determinant derivative against central differences")
{
    CHECK(det_derivative_error(kSeed + 2, 20) < 1e-6);
}

TEST_CASE("winding number counts the roots found in random boxes")
{
    WindingTally t = winding_consistency(kSeed + 3, 20);
    CHECK(t.boxes == 20);
    CHECK(t.mismatches == 0);
    CHECK(t.roots > 0);
}

TEST_CASE("amplitude outputs are invariant under a phase rotation of the Hopf pair")
{
    CHECK(phase_rotation_deviation(kSeed + 4) < 1e-10);
}
