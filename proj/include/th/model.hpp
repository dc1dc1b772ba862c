#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "th/common.hpp"

namespace th {

// values[j] holds phi(-r_j)
struct LagTuple {
    std::vector<CVec> values;
};

using QForm = std::function<CVec(const LagTuple&, const LagTuple&)>;
using CForm = std::function<CVec(const LagTuple&, const LagTuple&, const LagTuple&)>;

struct ParameterPoint {
    double a1 = 0, a2 = 0;
};

// Linear part is  sum_j A_j phi(-r_j) + D phi_xx, with D and A_j affine in alpha:
//   D(alpha) = D0 + alpha1 dD[0] + alpha2 dD[1]   (= D0 + D1(alpha)/2)
struct ModelSpec {
    std::string name;
    int m = 0;
    double l = 1;              // domain is (0, l*pi)
    std::vector<double> lags;  // lags[0] == 0
    RMat D0;
    std::array<RMat, 2> dD;
    std::vector<RMat> A;
    std::array<std::vector<RMat>, 2> dA;
    QForm Q;
    CForm C;

    int nlags() const { return static_cast<int>(lags.size()); }
    double max_lag() const { return lags.back(); }
    RMat D_at(const ParameterPoint& a) const;
    std::vector<RMat> A_at(const ParameterPoint& a) const;
    // Taylor-convention first-order terms: D1(alpha) = 2 (alpha1 dD1 + alpha2 dD2)
    RMat D1(const ParameterPoint& a) const;
    std::vector<RMat> L1(const ParameterPoint& a) const;
    double mu(int k) const { return (k / l) * (k / l); }
};

// Dense multilinear coefficient tensors over (species x lag) slots, slot = lag * m + species.
struct QuadTensor {
    int m = 0, nl = 0;
    std::vector<double> c; // [out][a][b]
    QuadTensor() = default;
    QuadTensor(int m_, int nl_) : m(m_), nl(nl_), c(static_cast<size_t>(m_) * m_ * nl_ * m_ * nl_, 0.0) {}
    int slots() const { return m * nl; }
    double& at(int o, int a, int b) { return c[(static_cast<size_t>(o) * slots() + a) * slots() + b]; }
    double at(int o, int a, int b) const { return c[(static_cast<size_t>(o) * slots() + a) * slots() + b]; }
    void add_symmetric(int o, int a, int b, double v);
};

struct CubicTensor {
    int m = 0, nl = 0;
    std::vector<double> c; // [out][a][b][c]
    CubicTensor() = default;
    CubicTensor(int m_, int nl_);
    int slots() const { return m * nl; }
    double& at(int o, int a, int b, int d);
    double at(int o, int a, int b, int d) const;
    void add_symmetric(int o, int a, int b, int d, double v);
};

QForm quadratic_form(QuadTensor t);
CForm cubic_form(CubicTensor t);
QForm zero_quadratic(int m);
CForm zero_cubic(int m);

LagTuple eigenprofile_samples(cd lambda, const CVec& v0, const std::vector<double>& lags);
LagTuple zero_tuple(int m, int nlags);

struct ValidationCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    uint64_t seed = 0;
    std::vector<ValidationCheck> checks;
};

inline constexpr uint64_t kProbeSeed = 20240611;

// Throws SymmetryViolation / NonPositiveDiffusion when `strict` and a check fails.
ValidationReport validate(const ModelSpec& spec, bool strict = true, double tol = 1e-12);

// Untranslated nonlinear system in physical units for direct simulation.
struct PdeSystem {
    int m = 0;
    double length = 1;         // x in (0, length)
    std::vector<double> lags;  // physical time, lags[0] == 0
    RVec diffusion;
    RVec steady;
    // lagged[j] is the N x m field at t - lags[j]; writes the N x m reaction into out
    std::function<void(const std::vector<RMat>&, RMat&)> reaction;
};

// A family of specs linearized at raw parameter values (p1, p2).  at(p) has alpha = 0 at p and
// dD/dA holding the exact raw partials there, so locate() can move through raw space.
struct ParametricModel {
    std::string name;
    std::array<std::string, 2> param_names{"p1", "p2"};
    std::function<ModelSpec(double, double)> at;
    std::function<PdeSystem(double, double)> pde; // optional
    // converts the model-time frequency at (p1, p2) into physical time units
    std::function<double(double, double, double)> physical_omega = [](double, double, double w) { return w; };
};

struct Chemistry {
    double a = 1, b = 2, d = 4;
    double u_star() const { return a + b; }
    double v_star() const { return b / ((a + b) * (a + b)); }
};

// Delayed Schnakenberg system with time rescaled by tau: parameters (tau, eps).
ParametricModel schnakenberg(double a, double b, double d);
ModelSpec schnakenberg_builtin(double a, double b, double d, double tau_star, double eps_star);

// Affine-in-parameter family from a single base spec (matrices at p = 0, constant derivatives).
ParametricModel affine_family(const ModelSpec& base, std::array<std::string, 2> names = {"p1", "p2"});

} // namespace th
