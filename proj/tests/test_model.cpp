#include <doctest.h>

#include <random>

#include "th/config.hpp"

using namespace th;

namespace {

LagTuple tuple(std::vector<CVec> v)
{
    return LagTuple{std::move(v)};
}

CVec vec2(cd a, cd b)
{
    CVec v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("schnakenberg steady state and linear part")
{
    Chemistry c{1, 2, 4};
    CHECK(c.u_star() == doctest::Approx(3));
    CHECK(c.v_star() == doctest::Approx(2.0 / 9));
    ModelSpec s = schnakenberg(1, 2, 4).at(0.5, 0.01);
    CHECK(s.A[1](0, 0) == doctest::Approx(0.5 * 4.0 / 3));
    CHECK(s.A[1](0, 1) == doctest::Approx(0.5 * 9));
    CHECK(s.D0(0, 0) == doctest::Approx(4 * 0.5 * 0.01));
    CHECK(validate(s).ok);
}

TEST_CASE("schnakenberg quadratic and cubic forms match finite differences of the reaction")
{
    ParametricModel pm = schnakenberg(1, 2, 4);
    const double tau = 0.3;
    ModelSpec s = pm.at(tau, 0.01);
    PdeSystem p = pm.pde(tau, 0.01);
    // directional derivatives of the physical reaction at lag-1 state (u*, v*) + t x
    RVec x(2);
    x << 0.7, -0.4;
    auto react = [&](double t) {
        RMat now(1, 2), old(1, 2);
        now << 3, 2.0 / 9;
        old = now;
        old.row(0) += t * x.transpose();
        RMat out;
        p.reaction({now, old}, out);
        return RVec(out.row(0).transpose());
    };
    double h = 1e-3;
    RVec d2 = (react(h) - 2 * react(0) + react(-h)) / (h * h);
    RVec d3 = (react(2 * h) - 2 * react(h) + 2 * react(-h) - react(-2 * h)) / (2 * h * h * h);
    LagTuple t = tuple({CVec::Zero(2), x.cast<cd>()});
    CVec q = s.Q(t, t) / tau, c = s.C(t, t, t) / tau;
    CHECK(std::abs(q[0].real() - d2[0]) < 1e-5);
    CHECK(std::abs(q[1].real() - d2[1]) < 1e-5);
    CHECK(std::abs(c[0].real() - d3[0]) < 1e-4);
    CHECK(std::abs(c[1].real() - d3[1]) < 1e-4);
}

TEST_CASE("validation rejects asymmetric forms and bad diffusion")
{
    ModelSpec s = schnakenberg(1, 2, 4).at(0.2, 0.002);
    ModelSpec bad = s;
    bad.Q = [](const LagTuple& x, const LagTuple& y) { return CVec(x.values[0][0] * y.values[0][1] * vec2(1, 0)); };
    CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("SymmetryViolation"), Error);
    ValidationReport r = validate(bad, false);
    CHECK_FALSE(r.ok);
    CHECK(r.seed == kProbeSeed);

    ModelSpec neg = s;
    neg.D0(0, 0) = -1;
    CHECK_THROWS_WITH_AS(validate(neg), doctest::Contains("NonPositiveDiffusion"), Error);

    ModelSpec shape = s;
    shape.A.pop_back();
    CHECK_THROWS_WITH_AS(validate(shape), doctest::Contains("InvalidChemistry"), Error);
    CHECK_THROWS_AS(schnakenberg(1, -2, 4), Error);
}

TEST_CASE("cubic tensor symmetric fill")
{
    CubicTensor t(1, 1);
    QuadTensor q(2, 1);
    q.add_symmetric(0, 0, 1, 2.0);
    CHECK(q.at(0, 1, 0) == 2.0);
    CubicTensor c(2, 1);
    c.add_symmetric(1, 0, 1, 1, 3.0);
    CHECK(c.at(1, 1, 0, 1) == 3.0);
    CHECK(c.at(1, 1, 1, 0) == 3.0);
    CHECK(c.at(1, 0, 0, 1) == 0.0);
    CForm f = cubic_form(c);
    LagTuple x = tuple({vec2(1, 2)});
    CHECK(std::abs(f(x, x, x)[1] - cd(3 * 3 * 1 * 2 * 2)) < 1e-12);
    (void)t;
}

TEST_CASE("model file parsing")
{
    const char* text = R"(
[model]
species = u, v
params = a, b
[lags]
r = 0, 1
[matrices]
D0 = [[1, 0], [0, 2]]
A1 = [[0.5, 0], [0, 0.25]]
dA2_0 = [[1, 0], [0, 1]]
[quadratic]
Q[u@0, v@1] = 2, -1   # output per species
[cubic]
C[u@1, u@1, v@0] = 6, 0
[run]
k1 = 0
)";
    ModelSource src = parse_model_config(text);
    CHECK(src.species.size() == 2);
    CHECK(src.run.at("k1") == "0");
    CHECK(src.model.param_names[1] == "b");
    ModelSpec s = src.model.at(0.1, 0.2);
    CHECK(s.A[0](0, 0) == doctest::Approx(0.2));
    CHECK(s.A[1](1, 1) == doctest::Approx(0.25));
    LagTuple x = tuple({vec2(1, 0), vec2(0, 1)}), y = tuple({vec2(0, 0), vec2(0, 1)});
    // Q[u@0, v@1] couples slot (u, lag 0) with (v, lag 1)
    CVec q = s.Q(x, x);
    CHECK(std::abs(q[0] - cd(4)) < 1e-14);
    CHECK(std::abs(q[1] - cd(-2)) < 1e-14);
    CHECK(s.Q(y, y).norm() == 0.0);
    PdeSystem p = src.model.pde(0, 0);
    CHECK(p.length == doctest::Approx(std::numbers::pi));
    CHECK(p.diffusion[1] == 2.0);
}

TEST_CASE("model file errors carry ConfigParse and a line number")
{
    auto err = [](const std::string& t) {
        try {
            parse_model_config(t, "m.ini");
        } catch (const Error& e) {
            CHECK(e.kind() == "ConfigParse");
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(err("[model]\nspecies = u\n[matrices]\nD0 = [[1]]\n[quadratic]\nQ[w@0, u@0] = 1\n").find("m.ini:6") !=
          std::string::npos);
    CHECK(err("[bogus]\n").find("unknown section") != std::string::npos);
    CHECK(err("[model]\nspecies = u\n").find("D0") != std::string::npos);
    CHECK(err("[model]\nspecies = u\n[matrices]\nD0 = [[1, 2]]\n").find("columns") != std::string::npos);
    CHECK(err("[model]\nspecies = u\n[lags]\nr = 0\n[matrices]\nD0 = [[1]]\n[quadratic]\nQ[u@1, u@0] = 1\n")
              .find("lag index") != std::string::npos);
    CHECK(err("[model]\nspecies = u, v\n[matrices]\nD0 = [[1, 0], [0, 1]]\n[quadratic]\nQ[u@0, v@0] = 1\n")
              .find("one entry per species") != std::string::npos);
    CHECK(err("[model]\nspecies = u\nspecies = v\n").find("duplicate") != std::string::npos);
}

TEST_CASE("builtin resolution")
{
    ModelSource s = resolve_model("schnakenberg");
    CHECK(s.model.name == "schnakenberg");
    ModelSource t = resolve_model("schnakenberg:1,3,5");
    ModelSpec sp = t.model.at(1, 0.01);
    CHECK(sp.D0(1, 1) == doctest::Approx(5));
    CHECK_THROWS_AS(resolve_model("schnakenberg:1,2"), Error);
    CHECK_THROWS_AS(resolve_model("/nonexistent/model.ini"), Error);
}
